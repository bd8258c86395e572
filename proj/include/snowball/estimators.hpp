#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "snowball/attributes.hpp"
#include "snowball/design.hpp"
#include "snowball/graph.hpp"

namespace snowball {

enum class WeightSource { Resampled, TruePi, Degree, Uniform };

/// Positive, finite per-unit weights standing in for inclusion probabilities.
struct WeightVector {
    std::vector<double> w;
    WeightSource source = WeightSource::Uniform;

    /// Throws InputError on an empty, non-positive or non-finite weight.
    WeightVector(std::vector<double> weights, WeightSource src);

    /// All ones.
    static WeightVector uniform(std::size_t n);
    /// Reported degrees; each must be at least 1.
    static WeightVector degree(std::span<const std::size_t> degrees);

    std::size_t size() const { return w.size(); }
};

/// sum(y/w) / sum(1/w).
double hajek(std::span<const double> y, const WeightVector& w);

/// With-replacement style variance for the ratio estimate `mu`:
/// 1/(n(n-1)) * sum_i (n * (y_i/w_i) / sum_j(1/w_j) - mu)^2. Needs n >= 2.
double variance_hajek(std::span<const double> y, const WeightVector& w, double mu);

/// Inverse standard normal CDF, accurate to well below 1e-8 on (0, 1).
double normal_quantile(double p);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// mu +/- z_{1-alpha/2} * sqrt(variance).
Interval confidence_interval(double mu, double variance, double alpha);

double sample_mean(std::span<const double> y);

/// Ratio estimator weighting each unit by its reported degree.
double vh(std::span<const double> y, std::span<const std::size_t> degrees);

enum class Estimator { New, Ybar, Vh };

std::string_view estimator_name(Estimator e);
/// Accepts "new", "ybar", "vh" in any case.
Estimator parse_estimator(std::string_view s);

struct EstimateResult {
    double estimate = 0.0;
    double variance = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha = 0.05;
    std::size_t n = 0;
    std::string estimator_tag;
};

/// Point estimate, variance, standard error and interval for weights `w`.
EstimateResult estimate(std::span<const double> y, const WeightVector& w, double alpha, std::string tag);

struct VariableSpec {
    enum class Kind { Attribute, Degree, KConcurrency };
    Kind kind = Kind::Degree;
    std::string attribute;
    std::size_t k = 10;

    static VariableSpec attr(std::string name) { return {Kind::Attribute, std::move(name), 10}; }
    static VariableSpec degree() { return {Kind::Degree, {}, 10}; }
    static VariableSpec k_concurrency(std::size_t k = 10) { return {Kind::KConcurrency, {}, k}; }

    /// "degree", "kconc" / "kconc:<k>", "attr:<name>" or a bare attribute name.
    static VariableSpec parse(std::string_view s);
    /// Stable display name used in reports ("degree", "kconc10", or the attribute).
    std::string name() const;

    friend bool operator==(const VariableSpec&, const VariableSpec&) = default;
};

/// Per-unit values of the variable for the sampled units. Degree-based
/// variables use reported degrees; k-concurrency is 1 when degree > k.
std::vector<double> extract_variable(const ObservedData& data, const VariableSpec& spec);
/// Per-node values over the whole population, from true degrees.
std::vector<double> extract_variable(const Network& net, const AttributeTable& attrs, const VariableSpec& spec);

/// CSV "estimator,variable,estimate,se,ci_low,ci_high,n,alpha".
void write_estimate_header(std::ostream& out);
void write_estimate_row(const EstimateResult& r, std::string_view variable, std::ostream& out);

} // namespace snowball
