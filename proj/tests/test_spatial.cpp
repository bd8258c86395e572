#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "snowball/design.hpp"
#include "snowball/error.hpp"
#include "snowball/spatial.hpp"

using namespace snowball;

namespace {

Grid grid(std::size_t rows, std::size_t cols, std::vector<double> counts) { return Grid{rows, cols, std::move(counts)}; }

NodeId cell(const Network& net, std::size_t r, std::size_t c) { return net.find(cell_label(r, c)).value(); }

} // namespace

TEST_CASE("occupied next to empty links one way") {
    const auto s = grid_to_network(grid(1, 2, {3, 0}), {});
    CHECK(s.net.link_count() == 1);
    CHECK(s.net.has_link(cell(s.net, 0, 0), cell(s.net, 0, 1)));
    std::ostringstream out;
    write_edge_list(s.net, out);
    CHECK(out.str() == "r0c0 r0c1 ->\n");
}

TEST_CASE("two occupied plots link both ways") {
    const auto s = grid_to_network(grid(1, 2, {2, 5}), {});
    CHECK(s.net.link_count() == 2);
    CHECK(s.attrs.column("count").values == std::vector<double>{2, 5});
}

TEST_CASE("empty grid has no links") {
    const auto s = grid_to_network(grid(2, 2, {0, 0, 0, 0}), {});
    CHECK(s.net.node_count() == 4);
    CHECK(s.net.link_count() == 0);
    CHECK(s.attrs.node_count() == 4);
}

TEST_CASE("threshold and adjacency") {
    SpatialRule rule;
    rule.threshold = 3.0;
    const auto s = grid_to_network(grid(1, 3, {2, 3, 4}), rule);
    CHECK(s.net.degree(cell(s.net, 0, 0)) == 0);
    CHECK(s.net.degree(cell(s.net, 0, 1)) == 2);
    CHECK(s.net.degree(cell(s.net, 0, 2)) == 1);

    const auto full = std::vector<double>(9, 1.0);
    const auto rook = grid_to_network(grid(3, 3, full), {Adjacency::Rook, 1.0});
    CHECK(rook.net.degree(cell(rook.net, 1, 1)) == 4);
    CHECK(rook.net.degree(cell(rook.net, 0, 0)) == 2);
    const auto queen = grid_to_network(grid(3, 3, full), {Adjacency::Queen, 1.0});
    CHECK(queen.net.degree(cell(queen.net, 1, 1)) == 8);
    CHECK(queen.net.degree(cell(queen.net, 0, 0)) == 3);
}

TEST_CASE("every 2x2 occupancy pattern follows the pair rules") {
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<double> counts(4);
        for (int b = 0; b < 4; ++b) counts[b] = (mask >> b) & 1 ? 1.0 : 0.0;
        for (const auto adj : {Adjacency::Rook, Adjacency::Queen}) {
            const auto s = grid_to_network(grid(2, 2, counts), {adj, 1.0});
            for (std::size_t a = 0; a < 4; ++a) {
                for (std::size_t b = 0; b < 4; ++b) {
                    if (a == b) continue;
                    const bool diagonal = (a / 2 != b / 2) && (a % 2 != b % 2);
                    const bool adjacent = adj == Adjacency::Queen || !diagonal;
                    const auto ia = cell(s.net, a / 2, a % 2);
                    const auto ib = cell(s.net, b / 2, b % 2);
                    CHECK(s.net.has_link(ia, ib) == (adjacent && counts[a] >= 1.0));
                }
            }
        }
    }
}

TEST_CASE("tracing never leaves an empty plot") {
    const auto s = grid_to_network(grid(3, 3, {0, 2, 0, 1, 1, 0, 0, 0, 3}), {});
    DesignConfig d;
    d.seed_count = 1;
    d.link_prob = 1.0;
    d.target_size = 9;
    d.reseed_on_exhaustion = false;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto rng = derive_stream(seed, 0);
        const auto rec = draw_sample(s.net, d, rng);
        for (const auto& e : rec.events) {
            if (e.recruiter) CHECK(s.attrs.column("count").values[*e.recruiter] >= 1.0);
        }
    }
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("2 3\n1 0 2\n0 0 4\n", "grid.txt");
    CHECK(g.rows == 2);
    CHECK(g.cols == 3);
    CHECK(g.at(1, 2) == 4.0);
    try {
        parse_grid("2 3\n1 0 2\n0 0\n", "grid.txt");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_grid("2 2\n1 0\n", "grid.txt"), InputError);
    CHECK_THROWS_AS(parse_grid("1 2\n1 -1\n", "grid.txt"), InputError);
    CHECK_THROWS_AS(parse_grid("x 2\n1 1\n", "grid.txt"), InputError);
}
