#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "snowball/error.hpp"
#include "snowball/resampler.hpp"

using namespace snowball;

namespace {

ResampleConfig repeated(std::size_t m, std::size_t T, std::size_t seeds, double q, std::optional<std::size_t> waves) {
    ResampleConfig c;
    c.mode = ResampleMode::Repeated;
    c.resamples = T;
    c.target_size = m;
    c.inner_design.seed_count = seeds;
    c.inner_design.link_prob = q;
    c.inner_design.max_waves = waves;
    c.inner_design.reseed_on_exhaustion = false;
    return c;
}

ResampleConfig process(std::size_t m, std::size_t T) {
    ResampleConfig c;
    c.mode = ResampleMode::Process;
    c.resamples = T;
    c.target_size = m;
    return c;
}

} // namespace

TEST_CASE("frequency arithmetic and flooring") {
    const auto t = make_frequency_table({3, 0, 4}, 4, 0.125, ResampleMode::Process);
    CHECK(t.f[0] == 0.75);
    CHECK(t.f[1] == 0.125);
    CHECK(t.f[2] == 1.0);
    CHECK(t.floored == std::vector<bool>{false, true, false});
    CHECK(t.floored_count() == 1);
    CHECK(t.raw(1) == 0.0);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(process(4, 10).validate(3), ConfigError);
    CHECK_THROWS_AS(process(2, 0).validate(3), ConfigError);
    auto c = process(2, 10);
    c.step_trace_count = 2;
    CHECK_THROWS_AS(c.validate(3), ConfigError);
    c = process(2, 10);
    c.reseed_rate = 1.0;
    CHECK_THROWS_AS(c.validate(3), ConfigError);
    CHECK(process(2, 10).effective_burn_in() == 20);
    CHECK(process(2, 10).effective_floor() == 0.05);
}

TEST_CASE("complete triangle: every resample covers all units") {
    const auto k3 = edge_list_from_string("a b\nb c\nc a\n", false);
    auto rng = derive_stream(1, 0);
    const auto t = estimate_frequencies(k3, repeated(3, 500, 1, 1.0, 1), rng);
    for (const double f : t.f) CHECK(f == 1.0);
}

TEST_CASE("path a-b-c: one full wave from a uniform seed") {
    const auto path = edge_list_from_string("a b\nb c\n", false);
    const std::size_t T = 100000;
    auto rng = derive_stream(2, 0);
    const auto t = estimate_frequencies(path, repeated(3, T, 1, 1.0, 1), rng);
    const double pi[] = {2.0 / 3.0, 1.0, 2.0 / 3.0};
    for (const char* l : {"a", "b", "c"}) {
        const auto i = path.find(l).value();
        const double tol = 3.0 * std::sqrt(pi[i] * (1.0 - pi[i]) / T);
        CHECK(std::abs(t.raw(i) - pi[i]) <= std::max(tol, 1e-12));
    }
}

TEST_CASE("single unit: the chain never moves") {
    NetworkBuilder b;
    b.add_node("only");
    const auto one = std::move(b).build();
    auto rng = derive_stream(3, 0);
    const auto t = estimate_frequencies(one, process(1, 1000), rng);
    CHECK(t.f[0] == 1.0);
    CHECK(t.counts[0] == 1000);
}

TEST_CASE("saturated chain keeps every unit") {
    const auto net = edge_list_from_string("a b\nb c\nc d\n", false);
    auto rng = derive_stream(4, 0);
    auto cfg = process(4, 2000);
    const auto t = estimate_frequencies(net, cfg, rng);
    for (const double f : t.f) CHECK(f == 1.0);
}

TEST_CASE("process size never exceeds the target and counts add up") {
    const auto net = edge_list_from_string("a b\nb c\nc d\nd e\ne a\nf g\n", false);
    auto cfg = process(3, 3000);
    cfg.burn_in = 10;
    auto rng = derive_stream(5, 0);
    auto state = ResampleState::start(net.node_count(), 0);
    std::uint64_t size_sum = 0;
    while (state.step < 10 + cfg.resamples) {
        process_step(state, net, cfg, rng);
        CHECK(state.size <= 3);
        CHECK(state.size >= 1);
        if (state.step > 10) size_sum += state.size;
    }
    CHECK(std::accumulate(state.counts.begin(), state.counts.end(), std::uint64_t{0}) == size_sum);
}

TEST_CASE("reseeding reaches a second component") {
    const auto net = edge_list_from_string("a b\nb c\nc a\nx y\ny z\nz x\n", false);
    auto cfg = process(3, 50000);
    cfg.reseed_rate = 0.05;
    auto rng = derive_stream(6, 0);
    const auto t = estimate_frequencies(net, cfg, rng);
    CHECK(t.floored_count() == 0);
    for (std::size_t i = 0; i < t.f.size(); ++i) CHECK(t.counts[i] > 0);
}

TEST_CASE("scaled inner design") {
    DesignConfig field;
    field.kind = DesignKind::ReRecruit;
    field.seed_count = 40;
    field.link_prob = 0.3;
    field.target_size = 200;
    const auto inner = scaled_inner_design(field, 70);
    CHECK(inner.kind == DesignKind::ReRecruit);
    CHECK(inner.link_prob == 0.3);
    CHECK(inner.target_size == 70);
    CHECK(inner.seed_count == 14);
    field.seed_count = 1;
    CHECK(scaled_inner_design(field, 10).seed_count == 1);
}

TEST_CASE("same seed gives the same frequencies") {
    const auto net = edge_list_from_string("a b\nb c\nc d\nd e\ne a\nb e\n", false);
    for (const auto mode : {ResampleMode::Process, ResampleMode::Repeated}) {
        auto cfg = mode == ResampleMode::Process ? process(3, 500) : repeated(3, 500, 1, 0.5, std::nullopt);
        auto r1 = derive_stream(7, 0);
        auto r2 = derive_stream(7, 0);
        CHECK(estimate_frequencies(net, cfg, r1).counts == estimate_frequencies(net, cfg, r2).counts);
    }
}

TEST_CASE("property: floored units are exactly those below the floor") {
    auto rng = derive_stream(8, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t T = 1 + uniform_index(rng, 50);
        std::vector<std::uint64_t> counts(1 + uniform_index(rng, 10));
        for (auto& c : counts) c = uniform_index(rng, T + 1);
        const double floor = (0.5 + static_cast<double>(uniform_index(rng, 3))) / static_cast<double>(T);
        if (floor >= 1.0) continue;
        const auto t = make_frequency_table(counts, T, floor, ResampleMode::Repeated);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            CHECK(t.floored[i] == (t.raw(i) < floor));
            CHECK(t.f[i] >= floor);
            CHECK(t.f[i] <= 1.0);
        }
    }
}

TEST_CASE("frequency file round-trip and validation") {
    const auto dir = std::filesystem::temp_directory_path() / "snowball_resampler_test";
    std::filesystem::create_directories(dir);
    const auto net = edge_list_from_string("a b\nb c\n", false);
    const auto t = make_frequency_table({2, 4, 0}, 4, 0.125, ResampleMode::Repeated);
    {
        std::ofstream out(dir / "freqs.csv");
        write_frequencies(t, net, out);
    }
    const auto back = read_frequencies((dir / "freqs.csv").string(), net);
    CHECK(back.f == t.f);
    CHECK(back.floored == t.floored);

    {
        std::ofstream out(dir / "short.csv");
        out << "unit_label,f,floored\na,0.5,0\nb,1,0\n";
    }
    try {
        read_frequencies((dir / "short.csv").string(), net);
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("'c'") != std::string::npos);
    }
    {
        std::ofstream out(dir / "zero.csv");
        out << "unit_label,f,floored\na,0.5,0\nb,0,0\nc,1,0\n";
    }
    CHECK_THROWS_AS(read_frequencies((dir / "zero.csv").string(), net), InputError);
    std::filesystem::remove_all(dir);
}
