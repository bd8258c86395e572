#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snowball/attributes.hpp"
#include "snowball/graph.hpp"
#include "snowball/rng.hpp"

namespace snowball {

/// A population: network plus per-node attributes.
struct Population {
    Network net;
    AttributeTable attrs;
};

enum class DegreeModel {
    /// Chung-Lu links with Pareto-distributed expected degrees.
    HeavyTailed,
    /// Each pair linked independently with the same probability.
    Uniform,
};

struct BernoulliColumn {
    std::string name;
    double p = 0.5;
};

/// Binary column with P(1) = logistic(logit(base_p) + slope * z), z being the
/// centred log(1 + degree). A positive slope makes high-degree nodes more
/// likely to carry the attribute.
struct DegreeCorrelatedColumn {
    std::string name;
    double base_p = 0.3;
    double slope = 1.0;
};

struct SyntheticSpec {
    std::size_t nodes = 1000;
    double mean_degree = 8.0;
    DegreeModel model = DegreeModel::HeavyTailed;
    /// Density exponent of the Pareto weights; must exceed 2 for a finite mean.
    double tail_exponent = 2.5;
    /// Give every isolated node one link to a uniformly chosen node.
    bool connect_isolated = true;
    std::vector<BernoulliColumn> bernoulli;
    std::optional<DegreeCorrelatedColumn> correlated;
};

/// Undirected population with node labels "0".."nodes-1". Throws ConfigError
/// for an infeasible spec (fewer than two nodes, mean degree outside
/// (0, nodes-1), exponent <= 2, probabilities outside [0, 1]).
Population generate_synthetic_population(const SyntheticSpec& spec, Rng& rng);

} // namespace snowball
