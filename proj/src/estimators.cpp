#include "snowball/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>

#include "snowball/error.hpp"
#include "snowball/text.hpp"

namespace snowball {

WeightVector::WeightVector(std::vector<double> weights, WeightSource src) : w(std::move(weights)), source(src) {
    if (w.empty()) throw InputError("weight vector is empty");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            throw InputError("weight " + std::to_string(i) + " is not positive and finite");
        }
    }
}

WeightVector WeightVector::uniform(std::size_t n) { return {std::vector<double>(n, 1.0), WeightSource::Uniform}; }

WeightVector WeightVector::degree(std::span<const std::size_t> degrees) {
    std::vector<double> w;
    w.reserve(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 1) {
            throw InputError("unit " + std::to_string(i) + " has reported degree 0; degree weighting needs d >= 1");
        }
        w.push_back(static_cast<double>(degrees[i]));
    }
    return {std::move(w), WeightSource::Degree};
}

namespace {

void check_aligned(std::span<const double> y, const WeightVector& w) {
    if (y.empty()) throw InputError("no sampled values");
    if (y.size() != w.size()) {
        throw InputError("value count " + std::to_string(y.size()) + " does not match weight count " +
                         std::to_string(w.size()));
    }
}

double inverse_weight_sum(const WeightVector& w) {
    double s = 0.0;
    for (const double wi : w.w) s += 1.0 / wi;
    return s;
}

} // namespace

double hajek(std::span<const double> y, const WeightVector& w) {
    check_aligned(y, w);
    double num = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) num += y[i] / w.w[i];
    return num / inverse_weight_sum(w);
}

double variance_hajek(std::span<const double> y, const WeightVector& w, double mu) {
    check_aligned(y, w);
    const std::size_t n = y.size();
    if (n < 2) throw InputError("variance needs at least two units");
    const double nd = static_cast<double>(n);
    const double inv_sum = inverse_weight_sum(w);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = nd * (y[i] / w.w[i]) / inv_sum - mu;
        ss += dev * dev;
    }
    return ss / (nd * (nd - 1.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("normal quantile needs p in (0, 1)");

    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

Interval confidence_interval(double mu, double variance, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (!(variance >= 0.0)) throw InputError("variance must be non-negative");
    const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance);
    return {mu - half, mu + half};
}

double sample_mean(std::span<const double> y) {
    if (y.empty()) throw InputError("no sampled values");
    double s = 0.0;
    for (const double v : y) s += v;
    return s / static_cast<double>(y.size());
}

double vh(std::span<const double> y, std::span<const std::size_t> degrees) {
    return hajek(y, WeightVector::degree(degrees));
}

std::string_view estimator_name(Estimator e) {
    switch (e) {
        case Estimator::New: return "NEW";
        case Estimator::Ybar: return "YBAR";
        case Estimator::Vh: return "VH";
    }
    return "?";
}

Estimator parse_estimator(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (lower == "new") return Estimator::New;
    if (lower == "ybar" || lower == "y-bar") return Estimator::Ybar;
    if (lower == "vh") return Estimator::Vh;
    throw ConfigError("unknown estimator '" + std::string(s) + "' (expected new, ybar or vh)");
}

EstimateResult estimate(std::span<const double> y, const WeightVector& w, double alpha, std::string tag) {
    EstimateResult r;
    r.estimate = hajek(y, w);
    r.variance = variance_hajek(y, w, r.estimate);
    r.se = std::sqrt(r.variance);
    const auto ci = confidence_interval(r.estimate, r.variance, alpha);
    r.ci_low = ci.low;
    r.ci_high = ci.high;
    r.alpha = alpha;
    r.n = y.size();
    r.estimator_tag = std::move(tag);
    return r;
}

VariableSpec VariableSpec::parse(std::string_view s) {
    s = text::trim(s);
    if (s.empty()) throw ConfigError("empty variable name");
    if (s == "degree") return degree();
    if (s == "kconc") return k_concurrency();
    if (s.starts_with("kconc:")) {
        const auto k = text::parse_int(s.substr(6));
        if (!k || *k < 0) throw ConfigError("invalid k in '" + std::string(s) + "'");
        return k_concurrency(static_cast<std::size_t>(*k));
    }
    if (s.starts_with("attr:")) return attr(std::string(s.substr(5)));
    return attr(std::string(s));
}

std::string VariableSpec::name() const {
    switch (kind) {
        case Kind::Attribute: return attribute;
        case Kind::Degree: return "degree";
        case Kind::KConcurrency: return "kconc" + std::to_string(k);
    }
    return {};
}

namespace {

std::vector<double> from_degrees(std::span<const std::size_t> degrees, const VariableSpec& spec) {
    std::vector<double> out;
    out.reserve(degrees.size());
    for (const auto d : degrees) {
        out.push_back(spec.kind == VariableSpec::Kind::Degree ? static_cast<double>(d) : (d > spec.k ? 1.0 : 0.0));
    }
    return out;
}

} // namespace

std::vector<double> extract_variable(const ObservedData& data, const VariableSpec& spec) {
    if (spec.kind == VariableSpec::Kind::Attribute) return data.values.column(spec.attribute).values;
    return from_degrees(data.reported_degree, spec);
}

std::vector<double> extract_variable(const Network& net, const AttributeTable& attrs, const VariableSpec& spec) {
    if (spec.kind == VariableSpec::Kind::Attribute) return attrs.column(spec.attribute).values;
    std::vector<std::size_t> degrees(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) degrees[i] = net.degree(i);
    return from_degrees(degrees, spec);
}

void write_estimate_header(std::ostream& out) { out << "estimator,variable,estimate,se,ci_low,ci_high,n,alpha\n"; }

void write_estimate_row(const EstimateResult& r, std::string_view variable, std::ostream& out) {
    out << r.estimator_tag << ',' << variable << ',' << text::format_double(r.estimate) << ','
        << text::format_double(r.se) << ',' << text::format_double(r.ci_low) << ',' << text::format_double(r.ci_high)
        << ',' << r.n << ',' << text::format_double(r.alpha) << '\n';
}

} // namespace snowball
