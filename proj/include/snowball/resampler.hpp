#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "snowball/design.hpp"
#include "snowball/graph.hpp"
#include "snowball/rng.hpp"

namespace snowball {

enum class ResampleMode {
    /// One Markov chain over subsets of the sample; each state is derived from
    /// the previous one by a few removals and link-traced additions.
    Process,
    /// Independent snowball draws on the sample network.
    Repeated,
};

struct ResampleConfig {
    ResampleMode mode = ResampleMode::Repeated;
    /// Number of counted resamples.
    std::size_t resamples = 10000;
    /// Process mode: uncounted steps after ramp-up. Defaults to 10 * target_size.
    std::optional<std::size_t> burn_in;
    /// Resample size m.
    std::size_t target_size = 1;
    std::size_t step_trace_count = 1;
    std::size_t step_remove_count = 1;
    /// Process mode: chance that an addition slot reseeds instead of tracing.
    double reseed_rate = 0.05;
    /// Repeated mode: design run on the sample network. Its target size is
    /// replaced by `target_size`.
    DesignConfig inner_design;
    /// Lower bound applied to every frequency. Defaults to 1 / (2 * resamples).
    std::optional<double> frequency_floor;

    std::size_t effective_burn_in() const { return burn_in.value_or(10 * target_size); }
    double effective_floor() const { return frequency_floor.value_or(0.5 / static_cast<double>(resamples)); }

    /// Throws ConfigError when the config cannot run on `unit_count` units.
    void validate(std::size_t unit_count) const;
};

/// The field design scaled down to resamples of size `m`: same kind, link
/// probability and wave limit, target `m`, and the seed count shrunk by
/// m / field.target_size (at least one seed).
DesignConfig scaled_inner_design(const DesignConfig& field, std::size_t m);

/// Estimated inclusion frequency per sampled unit.
struct FrequencyTable {
    /// max(floor, counts / resamples).
    std::vector<double> f;
    /// Number of counted resamples containing each unit. Empty when the table
    /// was read from a file.
    std::vector<std::uint64_t> counts;
    std::size_t resamples = 0;
    /// Units whose raw frequency was below the floor.
    std::vector<bool> floored;
    double floor = 0.0;
    ResampleMode mode = ResampleMode::Process;

    std::size_t floored_count() const;
    double raw(std::size_t i) const { return static_cast<double>(counts[i]) / static_cast<double>(resamples); }
};

/// Process-mode chain state. `order` is a permutation of the units whose first
/// `size` entries are the current members.
struct ResampleState {
    std::vector<NodeId> order;
    std::vector<std::size_t> position;
    std::size_t size = 0;
    std::vector<std::uint64_t> counts;
    /// Steps taken since the chain first reached the target size.
    std::size_t step = 0;

    /// A chain on `unit_count` units holding only `seed`.
    static ResampleState start(std::size_t unit_count, NodeId seed);

    bool contains(NodeId i) const { return position[i] < size; }
    std::vector<NodeId> members() const;

    void insert(NodeId i);
    void erase(NodeId i);
};

/// One transition of the resampling process on the sample network `net`.
///
/// Once the chain has reached the target size, `step_remove_count` uniformly
/// random members are removed first (never leaving fewer than one). Then up to
/// `step_trace_count` addition slots run while the state is below the target
/// size: with probability `reseed_rate`, or when no member has a link leaving
/// the state, a uniformly random outside unit is added; otherwise a uniformly
/// random link from a member to an outside unit is followed. Counters advance
/// for every step past the burn-in.
void process_step(ResampleState& state, const Network& net, const ResampleConfig& cfg, Rng& rng);

/// Inclusion frequencies for each unit of the sample network.
FrequencyTable estimate_frequencies(const Network& sample_net, const ResampleConfig& cfg, Rng& rng);

/// Applies the floor to raw counts.
FrequencyTable make_frequency_table(std::vector<std::uint64_t> counts, std::size_t resamples, double floor,
                                    ResampleMode mode);

/// CSV "unit_label,f,floored".
void write_frequencies(const FrequencyTable& table, const Network& net, std::ostream& out);
/// Reads a frequency CSV for the units of `net`; every unit must appear exactly
/// once and every f must lie in (0, 1].
FrequencyTable read_frequencies(const std::string& path, const Network& net);

} // namespace snowball
