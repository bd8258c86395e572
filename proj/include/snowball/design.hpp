#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "snowball/attributes.hpp"
#include "snowball/graph.hpp"
#include "snowball/rng.hpp"

namespace snowball {

enum class DesignKind {
    /// No repeat selections; recruitment events form a forest.
    Regular,
    /// A unit may be recruited again, but only by a different recruiter.
    ReRecruit,
};

struct DesignConfig {
    DesignKind kind = DesignKind::Regular;
    std::size_t seed_count = 1;
    /// Probability that each eligible out-link is followed.
    double link_prob = 1.0;
    /// Number of distinct units at which recruitment stops.
    std::size_t target_size = 1;
    /// Tracing rounds after the seeds; unlimited when empty.
    std::optional<std::size_t> max_waves;
    /// Add a fresh uniform seed when a wave brings no new units.
    bool reseed_on_exhaustion = true;

    /// Throws ConfigError when the config cannot be run on `node_count` nodes.
    void validate(std::size_t node_count) const;
};

struct RecruitEvent {
    /// Empty for seeds (initial or reseeded).
    std::optional<NodeId> recruiter;
    NodeId recruitee = 0;
    std::size_t wave = 0;

    bool is_seed() const { return !recruiter.has_value(); }
    friend bool operator==(const RecruitEvent&, const RecruitEvent&) = default;
};

struct SampleRecord {
    std::vector<NodeId> seeds;
    std::vector<RecruitEvent> events;
    /// Distinct units in order of first entry.
    std::vector<NodeId> distinct_units;
    /// Indices into `events` of seeds added after the initial wave 0.
    std::vector<std::size_t> reseed_points;
    /// Recruitment stopped before reaching the target size.
    bool short_of_target = false;

    friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Runs one snowball survey on `net`.
///
/// Seeds are drawn uniformly without replacement. Each wave, every unit that
/// was newly added in the previous wave follows each eligible out-link with
/// probability `link_prob`. Under Regular a link is eligible when its
/// destination is not yet sampled; under ReRecruit when the destination is not
/// the recruiter's own recruiter. The successful traces of a wave are admitted
/// in uniformly random order, so whichever wave crosses the target is cut at
/// exactly `target_size` distinct units.
SampleRecord draw_sample(const Network& net, const DesignConfig& cfg, Rng& rng);

/// What a survey yields: the sample network, the reported degree of each
/// sampled unit and its attribute values. Units are indexed by their id in
/// `sample.net` (ascending population id when built by observe()).
struct ObservedData {
    Subgraph sample;
    std::vector<std::size_t> reported_degree;
    AttributeTable values;
    /// Present when the data came from a simulated draw.
    std::optional<SampleRecord> record;

    std::size_t unit_count() const { return sample.net.node_count(); }
    const Network& net() const { return sample.net; }
};

/// Assembles the observed data for a record drawn from `net`. Reported degrees
/// are the true population degrees.
ObservedData observe(const Network& net, const AttributeTable& attrs, const SampleRecord& rec);

/// CSV "recruiter,recruitee,wave"; seeds carry recruiter "SEED".
void write_events(const SampleRecord& rec, const Network& net, std::ostream& out);
/// CSV "id,degree" in unit order.
void write_degrees(const ObservedData& obs, std::ostream& out);

/// Reads observed data from field files. The degree file defines the unit set
/// and order; edge-list and attribute labels must all be known units, and
/// every unit needs an attribute row. `attrs_path` may be empty.
ObservedData read_observed(const std::string& edges_path, const std::string& degrees_path,
                           const std::string& attrs_path, MissingPolicy policy);

} // namespace snowball
