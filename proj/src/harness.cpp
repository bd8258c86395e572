#include "snowball/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

void SimConfig::validate() const {
    if (reps < 2) throw ConfigError("reps must be at least 2 for the MSE decomposition");
    if (variables.empty()) throw ConfigError("at least one variable is required");
    if (estimators.empty()) throw ConfigError("at least one estimator is required");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (resample.target_size > design.target_size) {
        throw ConfigError("resample size exceeds the field sample size");
    }
}

Population load_population(const SimConfig& cfg) {
    if (cfg.edges_path.empty()) {
        auto rng = derive_stream(cfg.master_seed, ~std::uint64_t{0});
        return generate_synthetic_population(cfg.synthetic, rng);
    }
    Population pop{load_edge_list(cfg.edges_path, cfg.directed), {}};
    pop.attrs = cfg.attrs_path.empty() ? AttributeTable(pop.net.node_count())
                                       : load_attributes(cfg.attrs_path, pop.net, cfg.missing);
    return pop;
}

Decomposition mse_decomposition(std::span<const double> estimates, double truth) {
    if (estimates.size() < 2) throw InputError("MSE decomposition needs at least two estimates");
    const double r = static_cast<double>(estimates.size());
    double mean = 0.0;
    for (const double e : estimates) mean += e;
    mean /= r;

    double var = 0.0;
    double mse = 0.0;
    for (const double e : estimates) {
        var += (e - mean) * (e - mean);
        mse += (e - truth) * (e - truth);
    }
    Decomposition d;
    d.bias = mean - truth;
    d.variance = var / r;
    d.mse = mse / r;
    d.bias_sq_share = d.mse > 0.0 ? std::min(1.0, d.bias * d.bias / d.mse) : 0.0;
    return d;
}

double relative_efficiency(double mse_base, double mse_new) {
    if (!(mse_new > 0.0)) throw InputError("relative efficiency needs a positive competitor MSE");
    return mse_base / mse_new;
}

ParabolaFit fit_parabola(std::span<const ParabolaPoint> points, bool include_complements) {
    ParabolaFit fit;
    for (const auto& pt : points) {
        if (!(pt.p >= 0.0 && pt.p <= 1.0)) throw InputError("parabola point has p outside [0, 1]");
        fit.points.push_back(pt);
        if (include_complements) fit.points.push_back({1.0 - pt.p, pt.mse});
    }
    double sum_mse = 0.0;
    double sum_x = 0.0;
    for (const auto& pt : fit.points) {
        sum_mse += pt.mse;
        sum_x += pt.p * (1.0 - pt.p);
    }
    if (!(sum_x > 0.0)) throw InputError("parabola fit needs a point with p strictly between 0 and 1");
    fit.a = sum_mse / sum_x;
    return fit;
}

double coverage(std::span<const Interval> intervals, double truth) {
    if (intervals.empty()) throw InputError("coverage needs at least one interval");
    std::size_t hits = 0;
    for (const auto& ci : intervals) {
        if (ci.low <= truth && truth <= ci.high) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(intervals.size());
}

const CellSummary& SimulationReport::cell(std::string_view variable, Estimator est) const {
    for (const auto& c : cells) {
        if (c.variable == variable && c.estimator == est) return c;
    }
    throw Error("report has no cell for " + std::string(variable) + " / " + std::string(estimator_name(est)));
}

namespace {

struct ReplicateResult {
    /// Indexed [variable * estimators + estimator].
    std::vector<EstimateResult> cells;
    std::vector<std::uint64_t> freq_hist;
    std::uint64_t floored = 0;
};

ReplicateResult run_replicate(const Population& pop, const SimConfig& cfg, std::size_t index) {
    auto rng = derive_stream(cfg.master_seed, index);
    const auto rec = draw_sample(pop.net, cfg.design, rng);
    const auto obs = observe(pop.net, pop.attrs, rec);

    ReplicateResult out;
    out.freq_hist.assign(SimulationReport::kFreqBins, 0);
    std::optional<WeightVector> freq_weights;
    if (std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::New) != cfg.estimators.end()) {
        const auto table = estimate_frequencies(obs.net(), cfg.resample, rng);
        for (const double f : table.f) {
            const auto bin = static_cast<std::size_t>(std::ceil(f * SimulationReport::kFreqBins)) - 1;
            ++out.freq_hist[std::min(bin, SimulationReport::kFreqBins - 1)];
        }
        out.floored = table.floored_count();
        freq_weights.emplace(table.f, WeightSource::Resampled);
    }

    for (const auto& var : cfg.variables) {
        const auto y = extract_variable(obs, var);
        for (const auto est : cfg.estimators) {
            const std::string tag(estimator_name(est));
            switch (est) {
                case Estimator::New:
                    out.cells.push_back(estimate(y, *freq_weights, cfg.alpha, tag));
                    break;
                case Estimator::Ybar:
                    out.cells.push_back(estimate(y, WeightVector::uniform(y.size()), cfg.alpha, tag));
                    break;
                case Estimator::Vh:
                    out.cells.push_back(estimate(y, WeightVector::degree(obs.reported_degree), cfg.alpha, tag));
                    break;
            }
        }
    }
    return out;
}

} // namespace

SimulationReport run_simulation(const Population& pop, const SimConfig& cfg) {
    cfg.validate();
    cfg.design.validate(pop.net.node_count());
    if (pop.attrs.node_count() != pop.net.node_count()) {
        throw InputError("population attribute table does not match the network");
    }

    std::vector<double> truths;
    std::vector<bool> binary;
    for (const auto& var : cfg.variables) {
        const auto y = extract_variable(pop.net, pop.attrs, var);
        truths.push_back(sample_mean(y));
        binary.push_back(var.kind == VariableSpec::Kind::Attribute &&
                         pop.attrs.column(var.attribute).kind == ColumnKind::Binary);
    }

    std::vector<ReplicateResult> results(cfg.reps);
    std::vector<std::exception_ptr> failures(cfg.reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < cfg.reps; r = next++) {
            try {
                results[r] = run_replicate(pop, cfg, r);
            } catch (...) {
                failures[r] = std::current_exception();
            }
        }
    };

    std::size_t threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, cfg.reps);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    for (std::size_t r = 0; r < cfg.reps; ++r) {
        if (!failures[r]) continue;
        try {
            std::rethrow_exception(failures[r]);
        } catch (const std::exception& e) {
            throw Error("replicate " + std::to_string(r) + " failed: " + e.what());
        }
    }

    SimulationReport report;
    report.reps = cfg.reps;
    report.master_seed = cfg.master_seed;
    report.freq_hist.assign(SimulationReport::kFreqBins, 0);
    for (const auto& res : results) {
        for (std::size_t b = 0; b < res.freq_hist.size(); ++b) report.freq_hist[b] += res.freq_hist[b];
        report.floored_units += res.floored;
    }

    const std::size_t ne = cfg.estimators.size();
    for (std::size_t v = 0; v < cfg.variables.size(); ++v) {
        for (std::size_t e = 0; e < ne; ++e) {
            std::vector<double> estimates;
            std::vector<Interval> intervals;
            double se_sum = 0.0;
            double width_sum = 0.0;
            for (const auto& res : results) {
                const auto& c = res.cells[v * ne + e];
                estimates.push_back(c.estimate);
                intervals.push_back({c.ci_low, c.ci_high});
                se_sum += c.se;
                width_sum += c.ci_high - c.ci_low;
            }
            CellSummary cell;
            cell.variable = cfg.variables[v].name();
            cell.estimator = cfg.estimators[e];
            cell.binary = binary[v];
            cell.truth = truths[v];
            cell.decomposition = mse_decomposition(estimates, truths[v]);
            cell.mean_estimate = sample_mean(estimates);
            cell.expected_se = se_sum / static_cast<double>(cfg.reps);
            cell.mean_ci_width = width_sum / static_cast<double>(cfg.reps);
            cell.coverage = coverage(intervals, truths[v]);
            report.cells.push_back(std::move(cell));
        }
    }

    const bool has_new =
        std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::New) != cfg.estimators.end();
    if (has_new) {
        for (const auto& var : cfg.variables) {
            const auto& competitor = report.cell(var.name(), Estimator::New);
            for (const auto base : cfg.estimators) {
                if (base == Estimator::New) continue;
                EfficiencyRow row{var.name(), base, Estimator::New, std::nullopt};
                if (competitor.decomposition.mse > 0.0) {
                    row.ratio = relative_efficiency(report.cell(var.name(), base).decomposition.mse,
                                                    competitor.decomposition.mse);
                }
                report.efficiencies.push_back(std::move(row));
            }
        }
    }

    for (const auto est : cfg.estimators) {
        std::vector<ParabolaPoint> points;
        for (const auto& c : report.cells) {
            if (c.estimator == est && c.binary) points.push_back({c.truth, c.decomposition.mse});
        }
        const bool fittable =
            std::any_of(points.begin(), points.end(), [](const ParabolaPoint& p) { return p.p > 0.0 && p.p < 1.0; });
        if (fittable) report.parabolas.emplace_back(est, fit_parabola(points, true));
    }
    return report;
}

SimulationReport run_simulation(const SimConfig& cfg) {
    cfg.validate();
    return run_simulation(load_population(cfg), cfg);
}

void write_report_csv(const SimulationReport& report, std::ostream& out) {
    using text::format_double;
    out << "variable,estimator,truth,mean_estimate,bias,variance,mse,bias_sq_share,expected_se,mean_ci_width,"
           "coverage,re_vs_new,n_reps,master_seed\n";
    for (const auto& c : report.cells) {
        std::string re;
        for (const auto& row : report.efficiencies) {
            if (row.variable == c.variable && row.base == c.estimator && row.ratio) re = format_double(*row.ratio);
        }
        if (c.estimator == Estimator::New && !report.efficiencies.empty()) re = "1";
        const auto& d = c.decomposition;
        out << c.variable << ',' << estimator_name(c.estimator) << ',' << format_double(c.truth) << ','
            << format_double(c.mean_estimate) << ',' << format_double(d.bias) << ',' << format_double(d.variance)
            << ',' << format_double(d.mse) << ',' << format_double(d.bias_sq_share) << ','
            << format_double(c.expected_se) << ',' << format_double(c.mean_ci_width) << ','
            << format_double(c.coverage) << ',' << re << ',' << report.reps << ',' << report.master_seed << '\n';
    }
}

void write_coverage_csv(const SimulationReport& report, std::ostream& out) {
    out << "name,actual,E.se,width,coverage\n";
    if (report.cells.empty()) return;
    const bool has_new = std::any_of(report.cells.begin(), report.cells.end(),
                                     [](const CellSummary& c) { return c.estimator == Estimator::New; });
    const Estimator which = has_new ? Estimator::New : report.cells.front().estimator;
    for (const auto& c : report.cells) {
        if (c.estimator != which) continue;
        out << c.variable << ',' << text::format_double(c.truth) << ',' << text::format_double(c.expected_se) << ','
            << text::format_double(c.mean_ci_width) << ',' << text::format_double(c.coverage) << '\n';
    }
}

void write_parabola_csv(const SimulationReport& report, std::ostream& out) {
    out << "estimator,variable,p,mse,a\n";
    for (const auto& [est, fit] : report.parabolas) {
        std::vector<std::string> names;
        for (const auto& c : report.cells) {
            if (c.estimator == est && c.binary) names.push_back(c.variable);
        }
        // fit.points interleaves each variable with its complement.
        for (std::size_t i = 0; i < fit.points.size(); ++i) {
            const auto& base = names[i / 2];
            out << estimator_name(est) << ',' << (i % 2 == 0 ? base : "not " + base) << ','
                << text::format_double(fit.points[i].p) << ',' << text::format_double(fit.points[i].mse) << ','
                << text::format_double(fit.a) << '\n';
        }
    }
}

void write_freq_hist_csv(const SimulationReport& report, std::ostream& out) {
    out << "bin_low,bin_high,count\n";
    const double width = 1.0 / static_cast<double>(report.freq_hist.size());
    for (std::size_t b = 0; b < report.freq_hist.size(); ++b) {
        out << text::format_double(static_cast<double>(b) * width) << ','
            << text::format_double(static_cast<double>(b + 1) * width) << ',' << report.freq_hist[b] << '\n';
    }
}

void print_summary(const SimulationReport& report, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-5s %10s %10s %12s %12s %7s %8s\n", "variable", "est", "truth", "mean",
                  "bias", "mse", "bias^2%", "coverage");
    out << line;
    for (const auto& c : report.cells) {
        std::snprintf(line, sizeof line, "%-16s %-5s %10.4f %10.4f %12.5g %12.5g %7.1f %8.3f\n", c.variable.c_str(),
                      std::string(estimator_name(c.estimator)).c_str(), c.truth, c.mean_estimate, c.decomposition.bias,
                      c.decomposition.mse, 100.0 * c.decomposition.bias_sq_share, c.coverage);
        out << line;
    }
    for (const auto& row : report.efficiencies) {
        out << "relative efficiency " << estimator_name(row.competitor) << " vs " << estimator_name(row.base) << " ("
            << row.variable << "): " << (row.ratio ? text::format_double(*row.ratio) : std::string("n/a")) << '\n';
    }
    for (const auto& [est, fit] : report.parabolas) {
        out << "parabola a[" << estimator_name(est) << "] = " << text::format_double(fit.a) << '\n';
    }
    out << "replicates: " << report.reps << ", floored frequencies: " << report.floored_units << '\n';
}

} // namespace snowball
