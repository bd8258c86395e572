#pragma once

#include <cstdint>
#include <random>

namespace snowball {

using Rng = std::mt19937_64;

/// Independent stream for work item `index` under `master_seed`. A pure
/// function of its arguments, so results do not depend on which worker runs
/// which item.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t index);

/// Uniform in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

bool bernoulli(Rng& rng, double p);

} // namespace snowball
