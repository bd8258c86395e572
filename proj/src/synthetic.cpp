#include "snowball/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snowball/error.hpp"

namespace snowball {

namespace {

void validate(const SyntheticSpec& spec) {
    if (spec.nodes < 2) throw ConfigError("synthetic population needs at least two nodes");
    const double n = static_cast<double>(spec.nodes);
    if (!(spec.mean_degree > 0.0 && spec.mean_degree < n - 1.0)) {
        throw ConfigError("mean degree must lie in (0, nodes - 1)");
    }
    if (spec.model == DegreeModel::HeavyTailed && !(spec.tail_exponent > 2.0)) {
        throw ConfigError("tail exponent must exceed 2");
    }
    for (const auto& col : spec.bernoulli) {
        if (!(col.p >= 0.0 && col.p <= 1.0)) throw ConfigError("Bernoulli column '" + col.name + "' needs p in [0, 1]");
    }
    if (spec.correlated && !(spec.correlated->base_p > 0.0 && spec.correlated->base_p < 1.0)) {
        throw ConfigError("degree-correlated column needs base p in (0, 1)");
    }
}

// Expected degrees with mean `mean`, each capped so that every pair
// probability w_i * w_j / sum(w) stays at most 1.
std::vector<double> heavy_tailed_weights(const SyntheticSpec& spec, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double shape = spec.tail_exponent - 1.0;
    std::vector<double> w(spec.nodes);
    for (auto& x : w) x = std::pow(1.0 - unif(rng), -1.0 / shape);

    for (int iter = 0; iter < 50; ++iter) {
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        const double scale = spec.mean_degree * static_cast<double>(spec.nodes) / total;
        for (auto& x : w) x *= scale;
        const double cap = std::sqrt(spec.mean_degree * static_cast<double>(spec.nodes));
        bool clipped = false;
        for (auto& x : w) {
            if (x > cap) {
                x = cap;
                clipped = true;
            }
        }
        if (!clipped) break;
    }
    return w;
}

} // namespace

Population generate_synthetic_population(const SyntheticSpec& spec, Rng& rng) {
    validate(spec);
    const std::size_t n = spec.nodes;

    NetworkBuilder builder;
    for (std::size_t i = 0; i < n; ++i) builder.add_node(std::to_string(i));

    std::vector<std::size_t> deg(n, 0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto link = [&](std::size_t i, std::size_t j) {
        builder.add_undirected(static_cast<NodeId>(i), static_cast<NodeId>(j));
        ++deg[i];
        ++deg[j];
    };

    if (spec.model == DegreeModel::HeavyTailed) {
        const auto w = heavy_tailed_weights(spec, rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (unif(rng) < std::min(1.0, w[i] * w[j] / total)) link(i, j);
            }
        }
    } else {
        const double p = spec.mean_degree / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (unif(rng) < p) link(i, j);
            }
        }
    }

    if (spec.connect_isolated) {
        for (std::size_t i = 0; i < n; ++i) {
            if (deg[i] != 0) continue;
            std::size_t j = uniform_index(rng, n - 1);
            if (j >= i) ++j;
            link(i, j);
        }
    }

    Population pop{std::move(builder).build(), AttributeTable(n)};

    for (const auto& col : spec.bernoulli) {
        std::vector<double> values(n);
        for (auto& v : values) v = bernoulli(rng, col.p) ? 1.0 : 0.0;
        pop.attrs.add_column(col.name, std::move(values));
    }

    if (spec.correlated) {
        const auto& col = *spec.correlated;
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = std::log1p(static_cast<double>(pop.net.degree(static_cast<NodeId>(i))));
        const double mean_z = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(n);
        const double offset = std::log(col.base_p / (1.0 - col.base_p));
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-(offset + col.slope * (z[i] - mean_z))));
            values[i] = bernoulli(rng, p) ? 1.0 : 0.0;
        }
        pop.attrs.add_column(col.name, std::move(values));
    }
    return pop;
}

} // namespace snowball
