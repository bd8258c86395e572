#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "snowball/text.hpp"

namespace fs = std::filesystem;
using snowball::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return snowball::text::read_file(p.string()); }

void put(const fs::path& p, const std::string& s) {
    std::ofstream f(p);
    f << s;
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("snowball_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(dir);
        fs::create_directories(dir);
        std::ostringstream edges, attrs;
        attrs << "id,female\n";
        for (int i = 0; i < 60; ++i) {
            edges << i << ' ' << (i + 1) % 60 << '\n' << i << ' ' << (i * 7 + 3) % 60 << '\n';
            attrs << i << ',' << (i % 3 == 0 ? 1 : 0) << '\n';
        }
        put(dir / "pop.txt", edges.str());
        put(dir / "attrs.csv", attrs.str());
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::string> sample_args(const Workspace& w, const std::string& out) {
    return {"sample", "--edges", w.path("pop.txt"), "--attrs", w.path("attrs.csv"), "--design", "regular",
            "--n", "20", "--q", "0.5", "--seed", "7", "--out-dir", w.path(out)};
}

} // namespace

TEST_CASE("sample is deterministic and writes every file") {
    Workspace w;
    REQUIRE(call(sample_args(w, "a")).code == 0);
    REQUIRE(call(sample_args(w, "b")).code == 0);
    for (const auto* f : {"events.csv", "sample_edges.txt", "degrees.csv", "sample_attrs.csv"}) {
        CHECK(slurp(w.dir / "a" / f) == slurp(w.dir / "b" / f));
    }
}

TEST_CASE("zero tracing probability writes only seed events") {
    Workspace w;
    auto args = sample_args(w, "q0");
    args[10] = "0";
    args.insert(args.end(), {"--seeds", "4"});
    REQUIRE(call(args).code == 0);
    const auto events = slurp(w.dir / "q0" / "events.csv");
    const auto ls = snowball::text::lines(events);
    std::size_t rows = 0;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty()) continue;
        ++rows;
        CHECK(ls[i].rfind("SEED,", 0) == 0);
    }
    CHECK(rows == 20);
}

TEST_CASE("missing population file names the path") {
    Workspace w;
    const auto r = call({"sample", "--edges", w.path("nope.txt"), "--n", "5", "--out-dir", w.path("x")});
    CHECK(r.code != 0);
    CHECK(r.err.find("nope.txt") != std::string::npos);
}

TEST_CASE("sample output feeds resample and estimate unchanged") {
    Workspace w;
    REQUIRE(call(sample_args(w, "s")).code == 0);
    const auto s = w.path("s");
    const auto r = call({"resample", "--edges", s + "/sample_edges.txt", "--degrees", s + "/degrees.csv", "--T",
                         "300", "--resample-size", "7", "--out-dir", s});
    REQUIRE(r.code == 0);
    CHECK(slurp(w.dir / "s" / "freqs.csv").rfind("unit_label,f,floored\n", 0) == 0);

    const auto e = call({"estimate", "--edges", s + "/sample_edges.txt", "--degrees", s + "/degrees.csv", "--attrs",
                         s + "/sample_attrs.csv", "--freqs", s + "/freqs.csv", "--variables", "degree,kconc:3,female",
                         "--out-dir", s});
    REQUIRE(e.code == 0);
    const auto csv = slurp(w.dir / "s" / "estimates.csv");
    CHECK(snowball::text::lines(csv).size() >= 10);
    CHECK(csv.find("VH,female") != std::string::npos);
}

TEST_CASE("equal frequencies make NEW match YBAR; narrower intervals at larger alpha") {
    Workspace w;
    REQUIRE(call(sample_args(w, "s")).code == 0);
    const auto s = w.path("s");
    std::ostringstream freqs;
    freqs << "unit_label,f,floored\n";
    const auto degrees = slurp(w.dir / "s" / "degrees.csv");
    const auto ls = snowball::text::lines(degrees);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty()) continue;
        freqs << snowball::text::split(ls[i], ',')[0] << ",0.4,0\n";
    }
    put(w.dir / "s" / "equal.csv", freqs.str());
    auto args = std::vector<std::string>{"estimate", "--edges", s + "/sample_edges.txt", "--degrees",
                                         s + "/degrees.csv", "--freqs", s + "/equal.csv", "--variables", "degree",
                                         "--estimators", "new,ybar", "--out-dir", s};
    REQUIRE(call(args).code == 0);
    const auto rows = snowball::text::lines(slurp(w.dir / "s" / "estimates.csv"));
    REQUIRE(rows.size() >= 3);
    CHECK(rows[1].substr(rows[1].find(',')) == rows[2].substr(rows[2].find(',')));

    const auto width = [](std::string_view row) {
        const auto c = snowball::text::split(row, ',');
        return *snowball::text::parse_double(c[5]) - *snowball::text::parse_double(c[4]);
    };
    args.insert(args.end(), {"--alpha", "0.10"});
    args[10] = "ybar";
    const double w05 = width(rows[2]);
    REQUIRE(call(args).code == 0);
    const auto rows10 = snowball::text::lines(slurp(w.dir / "s" / "estimates.csv"));
    CHECK(width(rows10[1]) < w05);
}

TEST_CASE("mismatched unit sets name the offending unit") {
    Workspace w;
    REQUIRE(call(sample_args(w, "s")).code == 0);
    const auto s = w.path("s");
    put(w.dir / "s" / "bad_freqs.csv", "unit_label,f,floored\nghost,0.5,0\n");
    const auto r = call({"estimate", "--edges", s + "/sample_edges.txt", "--degrees", s + "/degrees.csv", "--freqs",
                         s + "/bad_freqs.csv", "--out-dir", s});
    CHECK(r.code != 0);
    CHECK(r.err.find("ghost") != std::string::npos);

    put(w.dir / "s" / "bad_attrs.csv", "id,female\nphantom,1\n");
    const auto a = call({"estimate", "--edges", s + "/sample_edges.txt", "--degrees", s + "/degrees.csv", "--attrs",
                         s + "/bad_attrs.csv", "--variables", "female", "--estimators", "ybar", "--out-dir", s});
    CHECK(a.code != 0);
    CHECK(a.err.find("phantom") != std::string::npos);
}

TEST_CASE("simulate: smoke run, thread independence, rep validation") {
    Workspace w;
    const auto base = std::vector<std::string>{"simulate", "--nodes", "50", "--mean-degree", "4", "--n", "20",
                                               "--resample-size", "7", "--T", "500", "--reps", "20",
                                               "--variables", "degree,kconc:3,attr30", "--seed", "3"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1", "--out-dir", w.path("t1")});
    auto eight = base;
    eight.insert(eight.end(), {"--threads", "8", "--out-dir", w.path("t8")});
    const auto r1 = call(one);
    REQUIRE(r1.code == 0);
    REQUIRE(call(eight).code == 0);
    CHECK(slurp(w.dir / "t1" / "report.csv") == slurp(w.dir / "t8" / "report.csv"));
    for (const auto* f : {"coverage.csv", "parabola.csv", "freq_hist.csv"}) CHECK(fs::exists(w.dir / "t1" / f));
    CHECK(r1.out.find("NEW") != std::string::npos);

    auto bad = base;
    bad[12] = "1";
    bad.insert(bad.end(), {"--out-dir", w.path("bad")});
    const auto r = call(bad);
    CHECK(r.code != 0);
    CHECK(r.err.find("reps") != std::string::npos);
}

TEST_CASE("spatial conversion") {
    Workspace w;
    put(w.dir / "g1.txt", "1 2\n3 0\n");
    REQUIRE(call({"spatial", "--grid", w.path("g1.txt"), "--out-dir", w.path("g1")}).code == 0);
    CHECK(slurp(w.dir / "g1" / "edges.txt") == "r0c0 r0c1 ->\n");

    put(w.dir / "g0.txt", "2 2\n0 0\n0 0\n");
    REQUIRE(call({"spatial", "--grid", w.path("g0.txt"), "--out-dir", w.path("g0")}).code == 0);
    CHECK(slurp(w.dir / "g0" / "edges.txt").empty());
    CHECK(snowball::text::lines(slurp(w.dir / "g0" / "counts.csv")).size() >= 5);

    put(w.dir / "ragged.txt", "2 3\n1 2 3\n4 5\n");
    const auto r = call({"spatial", "--grid", w.path("ragged.txt"), "--out-dir", w.path("r")});
    CHECK(r.code != 0);
    CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("config file values, overrides and unknown keys") {
    Workspace w;
    put(w.dir / "run.conf", "# sample settings\nedges = " + w.path("pop.txt") + "\nn = 20\nq = 0.5\nseed = 7\n");
    REQUIRE(call({"sample", "--config", w.path("run.conf"), "--out-dir", w.path("c1")}).code == 0);
    auto direct = sample_args(w, "c2");
    direct.erase(direct.begin() + 3, direct.begin() + 5);
    REQUIRE(call(direct).code == 0);
    CHECK(slurp(w.dir / "c1" / "events.csv") == slurp(w.dir / "c2" / "events.csv"));

    REQUIRE(call({"sample", "--config", w.path("run.conf"), "--seed", "8", "--out-dir", w.path("c3")}).code == 0);
    CHECK(slurp(w.dir / "c3" / "events.csv") != slurp(w.dir / "c1" / "events.csv"));

    put(w.dir / "bad.conf", "n = 20\nbogus = 1\n");
    const auto r = call({"sample", "--config", w.path("bad.conf"), "--edges", w.path("pop.txt")});
    CHECK(r.code != 0);
    CHECK(r.err.find("bogus") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(call({}).code != 0);
    CHECK(call({"frobnicate"}).code != 0);
    CHECK(call({"sample", "--n", "3"}).code != 0);
    const auto help = call({"simulate", "--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("--reps") != std::string::npos);
}
