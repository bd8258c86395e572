#include "snowball/design.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void DesignConfig::validate(std::size_t node_count) const {
    if (seed_count == 0) throw ConfigError("seed count must be positive");
    if (target_size < seed_count) throw ConfigError("target size must be at least the seed count");
    if (target_size > node_count) {
        throw ConfigError("target size " + std::to_string(target_size) + " exceeds node count " +
                          std::to_string(node_count));
    }
    if (!(link_prob >= 0.0 && link_prob <= 1.0)) throw ConfigError("link-following probability must lie in [0, 1]");
    if (max_waves && *max_waves == 0) throw ConfigError("max waves must be positive when set");
}

namespace {

constexpr NodeId kNone = static_cast<NodeId>(-1);

std::vector<NodeId> choose_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

} // namespace

SampleRecord draw_sample(const Network& net, const DesignConfig& cfg, Rng& rng) {
    cfg.validate(net.node_count());
    const std::size_t n = cfg.target_size;

    SampleRecord rec;
    std::vector<char> sampled(net.node_count(), 0);
    std::vector<NodeId> first_recruiter(net.node_count(), kNone);

    rec.seeds = choose_without_replacement(net.node_count(), cfg.seed_count, rng);
    for (const NodeId s : rec.seeds) {
        sampled[s] = 1;
        rec.distinct_units.push_back(s);
        rec.events.push_back({std::nullopt, s, 0});
    }

    std::vector<NodeId> frontier = rec.seeds;
    std::vector<std::pair<NodeId, NodeId>> traces;
    std::size_t wave = 0;
    while (rec.distinct_units.size() < n) {
        if (cfg.max_waves && wave >= *cfg.max_waves) break;
        ++wave;

        traces.clear();
        for (const NodeId u : frontier) {
            for (const NodeId v : net.out_neighbors(u)) {
                const bool eligible =
                    cfg.kind == DesignKind::Regular ? !sampled[v] : v != first_recruiter[u];
                if (eligible && bernoulli(rng, cfg.link_prob)) traces.emplace_back(u, v);
            }
        }
        std::shuffle(traces.begin(), traces.end(), rng);

        std::vector<NodeId> next;
        for (const auto& [u, v] : traces) {
            if (rec.distinct_units.size() >= n) break;
            if (!sampled[v]) {
                sampled[v] = 1;
                first_recruiter[v] = u;
                rec.distinct_units.push_back(v);
                rec.events.push_back({u, v, wave});
                next.push_back(v);
            } else if (cfg.kind == DesignKind::ReRecruit) {
                rec.events.push_back({u, v, wave});
            }
            // Regular: v was taken earlier in this wave by another recruiter.
        }

        if (next.empty() && rec.distinct_units.size() < n) {
            const bool waves_left = !cfg.max_waves || wave < *cfg.max_waves;
            if (!cfg.reseed_on_exhaustion || !waves_left) break;
            std::vector<NodeId> unsampled;
            for (NodeId i = 0; i < net.node_count(); ++i) {
                if (!sampled[i]) unsampled.push_back(i);
            }
            const NodeId r = unsampled[uniform_index(rng, unsampled.size())];
            sampled[r] = 1;
            rec.distinct_units.push_back(r);
            rec.reseed_points.push_back(rec.events.size());
            rec.events.push_back({std::nullopt, r, wave});
            next.push_back(r);
        }
        frontier = std::move(next);
    }
    rec.short_of_target = rec.distinct_units.size() < n;
    return rec;
}

ObservedData observe(const Network& net, const AttributeTable& attrs, const SampleRecord& rec) {
    if (attrs.node_count() != net.node_count()) {
        throw InputError("attribute table has " + std::to_string(attrs.node_count()) + " rows but network has " +
                         std::to_string(net.node_count()) + " nodes");
    }
    for (const auto& e : rec.events) {
        if (!net.contains(e.recruitee) || (e.recruiter && !net.contains(*e.recruiter))) {
            throw InputError("sample record does not belong to this network");
        }
    }
    for (const NodeId u : rec.distinct_units) {
        if (!net.contains(u)) throw InputError("sample record does not belong to this network");
    }

    ObservedData obs;
    obs.sample = induced_subgraph(net, rec.distinct_units);
    obs.reported_degree.reserve(obs.sample.parent_ids.size());
    for (const NodeId p : obs.sample.parent_ids) obs.reported_degree.push_back(net.degree(p));
    obs.values = attrs.slice(obs.sample.parent_ids);
    obs.record = rec;
    return obs;
}

void write_events(const SampleRecord& rec, const Network& net, std::ostream& out) {
    out << "recruiter,recruitee,wave\n";
    for (const auto& e : rec.events) {
        out << (e.recruiter ? net.label(*e.recruiter) : std::string("SEED")) << ',' << net.label(e.recruitee) << ','
            << e.wave << '\n';
    }
}

void write_degrees(const ObservedData& obs, std::ostream& out) {
    out << "id,degree\n";
    for (NodeId i = 0; i < obs.unit_count(); ++i) {
        out << obs.net().label(i) << ',' << obs.reported_degree[i] << '\n';
    }
}

ObservedData read_observed(const std::string& edges_path, const std::string& degrees_path,
                           const std::string& attrs_path, MissingPolicy policy) {
    NetworkBuilder builder;
    std::vector<std::size_t> degrees;

    const auto contents = text::read_file(degrees_path);
    const auto all = text::lines(contents);
    bool header_seen = false;
    for (std::size_t n = 0; n < all.size(); ++n) {
        const auto line = text::trim(all[n]);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto where = degrees_path + ":" + std::to_string(n + 1);
        const auto cells = text::split(line, ',');
        if (cells.size() != 2) throw InputError(where + ": expected 'id,degree'");
        const auto label = text::trim(cells[0]);
        if (builder.find(label)) throw InputError(where + ": duplicate unit '" + std::string(label) + "'");
        const auto d = text::parse_int(cells[1]);
        if (!d || *d < 0) throw InputError(where + ": invalid degree for unit '" + std::string(label) + "'");
        builder.add_node(label);
        degrees.push_back(static_cast<std::size_t>(*d));
    }
    if (degrees.empty()) throw InputError(degrees_path + ": no sampled units");

    parse_edge_list(text::read_file(edges_path), edges_path, true, builder, false);

    ObservedData obs;
    obs.sample.net = std::move(builder).build();
    obs.sample.parent_ids.resize(obs.sample.net.node_count());
    std::iota(obs.sample.parent_ids.begin(), obs.sample.parent_ids.end(), NodeId{0});
    obs.reported_degree = std::move(degrees);
    for (NodeId i = 0; i < obs.unit_count(); ++i) {
        if (obs.reported_degree[i] < obs.net().degree(i)) {
            throw InputError(degrees_path + ": reported degree of unit '" + obs.net().label(i) +
                             "' is below its degree in the sample network");
        }
    }
    obs.values = attrs_path.empty()
                     ? AttributeTable(obs.unit_count())
                     : parse_attributes(text::read_file(attrs_path), attrs_path, obs.net(), policy, true);
    return obs;
}

} // namespace snowball
