#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "snowball/attributes.hpp"
#include "snowball/error.hpp"
#include "snowball/graph.hpp"

using namespace snowball;

namespace {

const Network& abc() {
    static const Network net = edge_list_from_string("a b\nb c\n", false);
    return net;
}

std::string error_of(std::string_view csv, MissingPolicy policy) {
    try {
        parse_attributes(csv, "attrs.csv", abc(), policy);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("binary and numeric columns") {
    const auto t = parse_attributes("id,female,age\na,1,30\nb,0,41.5\nc,1,22\n", "attrs.csv", abc(),
                                    MissingPolicy::Zero);
    CHECK(t.column("female").kind == ColumnKind::Binary);
    CHECK(t.column("age").kind == ColumnKind::Numeric);
    CHECK(t.column("age").values[abc().find("b").value()] == 41.5);
}

TEST_CASE("empty cell under the zero policy") {
    const auto t = parse_attributes("id,female\na,1\nb,\nc,0\n", "attrs.csv", abc(), MissingPolicy::Zero);
    const auto b = abc().find("b").value();
    CHECK(t.column("female").values[b] == 0.0);
    CHECK(t.column("female").missing[b]);
    CHECK_FALSE(t.column("female").missing[abc().find("a").value()]);
    CHECK(t.column("female").kind == ColumnKind::Binary);
}

TEST_CASE("empty cell under the error policy names row and column") {
    const auto msg = error_of("id,female\na,1\nb,\nc,0\n", MissingPolicy::Error);
    CHECK(msg.find("'b'") != std::string::npos);
    CHECK(msg.find("female") != std::string::npos);
}

TEST_CASE("rejected inputs") {
    CHECK(error_of("id,x\nzz,1\n", MissingPolicy::Zero).find("zz") != std::string::npos);
    CHECK(error_of("id,x\na,one\n", MissingPolicy::Zero).find("one") != std::string::npos);
    CHECK_FALSE(error_of("id,x\na,1\na,0\n", MissingPolicy::Zero).empty());
    CHECK_FALSE(error_of("id,x\na,1,2\n", MissingPolicy::Zero).empty());
    CHECK_FALSE(error_of("id,x\na,1\nb,1\n", MissingPolicy::Error).empty());
}

TEST_CASE("nodes without a row are missing under the zero policy") {
    const auto t = parse_attributes("id,x\na,1\n", "attrs.csv", abc(), MissingPolicy::Zero);
    const auto c = abc().find("c").value();
    CHECK(t.column("x").values[c] == 0.0);
    CHECK(t.column("x").missing[c]);
    CHECK_THROWS_AS(parse_attributes("id,x\na,1\n", "attrs.csv", abc(), MissingPolicy::Zero, true), InputError);
}

TEST_CASE("table rules") {
    AttributeTable t(3);
    t.add_column("x", {1, 2, 3});
    CHECK_THROWS_AS(t.add_column("x", {1, 2, 3}), InputError);
    CHECK_THROWS_AS(t.add_column("y", {1, 2}), InputError);
    CHECK_THROWS_AS(t.column("nope"), InputError);
    const std::vector<NodeId> rows{2, 0};
    const auto s = t.slice(rows);
    CHECK(s.node_count() == 2);
    CHECK(s.column("x").values == std::vector<double>{3, 1});
}

TEST_CASE("write and parse round-trip") {
    const auto t = parse_attributes("id,x,y\na,1,0.25\nb,,2\nc,0,3\n", "attrs.csv", abc(), MissingPolicy::Zero);
    std::ostringstream out;
    write_attributes(t, abc(), out);
    CHECK(out.str() == "id,x,y\na,1,0.25\nb,,2\nc,0,3\n");
    const auto again = parse_attributes(out.str(), "again.csv", abc(), MissingPolicy::Zero);
    CHECK(again.column("y").values == t.column("y").values);
    CHECK(again.column("x").missing == t.column("x").missing);
}
