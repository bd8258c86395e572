#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "snowball/attributes.hpp"
#include "snowball/design.hpp"
#include "snowball/estimators.hpp"
#include "snowball/resampler.hpp"
#include "snowball/synthetic.hpp"

namespace snowball {

/// Repeated-sampling study from a known population.
struct SimConfig {
    /// Population files; when `edges_path` is empty the synthetic generator settings are used.
    std::string edges_path;
    std::string attrs_path;
    bool directed = false;
    MissingPolicy missing = MissingPolicy::Zero;
    SyntheticSpec synthetic;

    DesignConfig design;
    ResampleConfig resample;
    std::vector<VariableSpec> variables;
    std::vector<Estimator> estimators{Estimator::New, Estimator::Ybar, Estimator::Vh};
    std::size_t reps = 100;
    double alpha = 0.05;
    std::uint64_t master_seed = 1;
    /// Worker count; 0 means one per hardware thread. Never affects results.
    std::size_t threads = 0;

    /// Throws ConfigError on an invalid combination.
    void validate() const;
};

/// Loads the population files, or generates the synthetic population from a
/// stream derived from the master seed.
Population load_population(const SimConfig& cfg);

struct Decomposition {
    double bias = 0.0;
    double variance = 0.0;
    double mse = 0.0;
    /// bias^2 / mse, 0 when mse is 0.
    double bias_sq_share = 0.0;
};

/// Bias, 1/R variance, and mean squared error about `truth`, so that
/// mse = variance + bias^2. Needs at least two estimates.
Decomposition mse_decomposition(std::span<const double> estimates, double truth);

/// mse_base / mse_new. Throws when mse_new is not positive.
double relative_efficiency(double mse_base, double mse_new);

struct ParabolaPoint {
    double p = 0.0;
    double mse = 0.0;
};

/// MSE = a * p(1-p) fitted by the ratio sum(mse) / sum(p(1-p)).
struct ParabolaFit {
    double a = 0.0;
    std::vector<ParabolaPoint> points;
};

/// With `include_complements`, each point (p, mse) also contributes
/// (1-p, mse). Throws when every p is 0 or 1.
ParabolaFit fit_parabola(std::span<const ParabolaPoint> points, bool include_complements);

/// Fraction of intervals with low <= truth <= high.
double coverage(std::span<const Interval> intervals, double truth);

struct CellSummary {
    std::string variable;
    Estimator estimator = Estimator::New;
    /// Variable is a binary attribute (eligible for the parabola fit).
    bool binary = false;
    double truth = 0.0;
    double mean_estimate = 0.0;
    Decomposition decomposition;
    double expected_se = 0.0;
    double mean_ci_width = 0.0;
    double coverage = 0.0;
};

struct EfficiencyRow {
    std::string variable;
    Estimator base = Estimator::Ybar;
    Estimator competitor = Estimator::New;
    /// mse(base) / mse(competitor); empty when mse(competitor) is 0.
    std::optional<double> ratio;
};

struct SimulationReport {
    std::vector<CellSummary> cells;
    std::vector<EfficiencyRow> efficiencies;
    std::vector<std::pair<Estimator, ParabolaFit>> parabolas;
    /// Histogram of floored inclusion frequencies over all replicates, in
    /// `kFreqBins` equal bins on (0, 1].
    std::vector<std::uint64_t> freq_hist;
    std::uint64_t floored_units = 0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;

    static constexpr std::size_t kFreqBins = 20;

    /// Throws Error when absent.
    const CellSummary& cell(std::string_view variable, Estimator est) const;
};

/// Runs `cfg.reps` replicates of draw, observe, resample and estimate on
/// `pop`. Replicate r uses the stream derive_stream(master_seed, r), and
/// results are merged in replicate order, so the report is the same for any
/// worker count. A failing replicate aborts the run with its index.
SimulationReport run_simulation(const Population& pop, const SimConfig& cfg);
SimulationReport run_simulation(const SimConfig& cfg);

/// variable,estimator,truth,mean_estimate,bias,variance,mse,bias_sq_share,
/// expected_se,mean_ci_width,coverage,re_vs_new,n_reps,master_seed
void write_report_csv(const SimulationReport& report, std::ostream& out);
/// name,actual,E.se,width,coverage for the NEW estimator (or the first
/// estimator run when NEW is absent).
void write_coverage_csv(const SimulationReport& report, std::ostream& out);
/// estimator,variable,p,mse,a; one row per point including complements.
void write_parabola_csv(const SimulationReport& report, std::ostream& out);
/// bin_low,bin_high,count
void write_freq_hist_csv(const SimulationReport& report, std::ostream& out);
/// Human-readable table of the report.
void print_summary(const SimulationReport& report, std::ostream& out);

} // namespace snowball
