#include "snowball/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void ResampleConfig::validate(std::size_t unit_count) const {
    if (unit_count == 0) throw ConfigError("sample has no units");
    if (resamples == 0) throw ConfigError("number of resamples must be positive");
    if (target_size == 0) throw ConfigError("resample size must be positive");
    if (target_size > unit_count) {
        throw ConfigError("resample size " + std::to_string(target_size) + " exceeds sampled unit count " +
                          std::to_string(unit_count));
    }
    if (!(reseed_rate >= 0.0 && reseed_rate < 1.0)) throw ConfigError("reseed rate must lie in [0, 1)");
    const double fl = effective_floor();
    if (!(fl > 0.0 && fl < 1.0)) throw ConfigError("frequency floor must lie in (0, 1)");
    if (mode == ResampleMode::Process) {
        if (step_trace_count == 0 || step_remove_count == 0) throw ConfigError("step counts must be positive");
        if (step_trace_count != step_remove_count) {
            throw ConfigError("process steps must add and remove the same number of units");
        }
    } else {
        DesignConfig inner = inner_design;
        inner.target_size = target_size;
        inner.validate(unit_count);
    }
}

DesignConfig scaled_inner_design(const DesignConfig& field, std::size_t m) {
    DesignConfig inner = field;
    inner.target_size = m;
    const double scaled = static_cast<double>(field.seed_count) * static_cast<double>(m) /
                          static_cast<double>(std::max<std::size_t>(field.target_size, 1));
    inner.seed_count = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(scaled)), 1, std::max<std::size_t>(m, 1));
    return inner;
}

std::size_t FrequencyTable::floored_count() const {
    return static_cast<std::size_t>(std::count(floored.begin(), floored.end(), true));
}

ResampleState ResampleState::start(std::size_t unit_count, NodeId seed) {
    ResampleState s;
    s.order.resize(unit_count);
    std::iota(s.order.begin(), s.order.end(), NodeId{0});
    s.position.resize(unit_count);
    std::iota(s.position.begin(), s.position.end(), std::size_t{0});
    s.counts.assign(unit_count, 0);
    s.insert(seed);
    return s;
}

std::vector<NodeId> ResampleState::members() const {
    std::vector<NodeId> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(out.begin(), out.end());
    return out;
}

void ResampleState::insert(NodeId i) {
    if (contains(i)) return;
    const std::size_t p = position[i];
    const NodeId other = order[size];
    std::swap(order[p], order[size]);
    position[other] = p;
    position[i] = size;
    ++size;
}

void ResampleState::erase(NodeId i) {
    if (!contains(i)) return;
    --size;
    const std::size_t p = position[i];
    const NodeId other = order[size];
    std::swap(order[p], order[size]);
    position[other] = p;
    position[i] = size;
}

namespace {

void add_outside_unit(ResampleState& state, Rng& rng) {
    const std::size_t outside = state.order.size() - state.size;
    state.insert(state.order[state.size + uniform_index(rng, outside)]);
}

// Follows a uniformly random link from a member to a non-member. Returns false
// when no such link exists.
bool trace_link(ResampleState& state, const Network& net, Rng& rng) {
    std::size_t available = 0;
    for (std::size_t k = 0; k < state.size; ++k) {
        for (const NodeId v : net.out_neighbors(state.order[k])) {
            if (!state.contains(v)) ++available;
        }
    }
    if (available == 0) return false;
    std::size_t pick = uniform_index(rng, available);
    for (std::size_t k = 0; k < state.size; ++k) {
        for (const NodeId v : net.out_neighbors(state.order[k])) {
            if (state.contains(v)) continue;
            if (pick-- == 0) {
                state.insert(v);
                return true;
            }
        }
    }
    return false;
}

} // namespace

void process_step(ResampleState& state, const Network& net, const ResampleConfig& cfg, Rng& rng) {
    const std::size_t m = cfg.target_size;
    const bool ramped = state.size >= m;

    if (ramped) {
        for (std::size_t r = 0; r < cfg.step_remove_count && state.size > 1; ++r) {
            state.erase(state.order[uniform_index(rng, state.size)]);
        }
    }
    for (std::size_t a = 0; a < cfg.step_trace_count && state.size < m; ++a) {
        if (state.size == state.order.size()) break;
        if (bernoulli(rng, cfg.reseed_rate) || !trace_link(state, net, rng)) add_outside_unit(state, rng);
    }

    if (!ramped) return;
    ++state.step;
    if (state.step > cfg.effective_burn_in()) {
        for (std::size_t k = 0; k < state.size; ++k) ++state.counts[state.order[k]];
    }
}

FrequencyTable make_frequency_table(std::vector<std::uint64_t> counts, std::size_t resamples, double floor,
                                    ResampleMode mode) {
    FrequencyTable table;
    table.resamples = resamples;
    table.floor = floor;
    table.mode = mode;
    table.f.reserve(counts.size());
    table.floored.reserve(counts.size());
    for (const auto c : counts) {
        const double raw = static_cast<double>(c) / static_cast<double>(resamples);
        table.floored.push_back(raw < floor);
        table.f.push_back(std::max(floor, raw));
    }
    table.counts = std::move(counts);
    return table;
}

FrequencyTable estimate_frequencies(const Network& sample_net, const ResampleConfig& cfg, Rng& rng) {
    const std::size_t units = sample_net.node_count();
    cfg.validate(units);
    const std::size_t T = cfg.resamples;

    if (cfg.mode == ResampleMode::Repeated) {
        DesignConfig inner = cfg.inner_design;
        inner.target_size = cfg.target_size;
        std::vector<std::uint64_t> counts(units, 0);
        for (std::size_t t = 0; t < T; ++t) {
            const auto rec = draw_sample(sample_net, inner, rng);
            for (const NodeId u : rec.distinct_units) ++counts[u];
        }
        return make_frequency_table(std::move(counts), T, cfg.effective_floor(), cfg.mode);
    }

    auto state = ResampleState::start(units, static_cast<NodeId>(uniform_index(rng, units)));
    const std::size_t total = cfg.effective_burn_in() + T;
    while (state.step < total) process_step(state, sample_net, cfg, rng);
    return make_frequency_table(std::move(state.counts), T, cfg.effective_floor(), cfg.mode);
}

void write_frequencies(const FrequencyTable& table, const Network& net, std::ostream& out) {
    out << "unit_label,f,floored\n";
    for (NodeId i = 0; i < table.f.size(); ++i) {
        out << net.label(i) << ',' << text::format_double(table.f[i]) << ',' << (table.floored[i] ? 1 : 0) << '\n';
    }
}

FrequencyTable read_frequencies(const std::string& path, const Network& net) {
    const auto contents = text::read_file(path);
    const auto all = text::lines(contents);

    FrequencyTable table;
    table.f.assign(net.node_count(), 0.0);
    table.floored.assign(net.node_count(), false);
    std::vector<bool> seen(net.node_count(), false);
    bool header_seen = false;
    for (std::size_t n = 0; n < all.size(); ++n) {
        const auto line = text::trim(all[n]);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto where = path + ":" + std::to_string(n + 1);
        const auto cells = text::split(line, ',');
        if (cells.size() != 2 && cells.size() != 3) throw InputError(where + ": expected 'unit_label,f[,floored]'");
        const auto label = text::trim(cells[0]);
        const auto id = net.find(label);
        if (!id) throw InputError(where + ": unknown unit '" + std::string(label) + "'");
        if (seen[*id]) throw InputError(where + ": duplicate unit '" + std::string(label) + "'");
        const auto f = text::parse_double(cells[1]);
        if (!f || !(*f > 0.0 && *f <= 1.0)) {
            throw InputError(where + ": frequency for unit '" + std::string(label) + "' must lie in (0, 1]");
        }
        seen[*id] = true;
        table.f[*id] = *f;
        table.floored[*id] = cells.size() == 3 && text::trim(cells[2]) == "1";
    }
    for (NodeId i = 0; i < net.node_count(); ++i) {
        if (!seen[i]) throw InputError(path + ": no frequency for unit '" + net.label(i) + "'");
    }
    return table;
}

} // namespace snowball
