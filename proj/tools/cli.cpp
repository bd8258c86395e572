#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "snowball/design.hpp"
#include "snowball/error.hpp"
#include "snowball/estimators.hpp"
#include "snowball/graph.hpp"
#include "snowball/harness.hpp"
#include "snowball/resampler.hpp"
#include "snowball/spatial.hpp"
#include "snowball/synthetic.hpp"
#include "snowball/text.hpp"

namespace snowball::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string threads = "AUTO";
};

struct DesignOpts {
    std::string kind = "regular";
    std::size_t seeds = 0;
    double q = 0.3;
    std::size_t max_waves = 0;
    bool no_reseed = false;
    std::size_t n = 0;
};

struct ResampleOpts {
    std::string mode = "repeated";
    std::size_t T = 10000;
    std::size_t resample_size = 0;
    std::size_t burn_in = 0;
    bool burn_in_set = false;
    double reseed_rate = 0.05;
    double freq_floor = 0.0;
    std::size_t step_size = 1;
    std::size_t inner_seeds = 0;
    std::size_t inner_waves = 0;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    sub->add_option("--out-dir", o.out_dir, "Directory for output files")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker count or AUTO (never changes results)")->capture_default_str();
    sub->add_option("--config", "Flat 'key = value' file; keys are long flag names, flags on the command line win");
}

void add_design(CLI::App* sub, DesignOpts& o, bool need_n) {
    sub->add_option("--design", o.kind, "Snowball design: regular or rerecruit")
        ->check(CLI::IsMember({"regular", "rerecruit"}))
        ->capture_default_str();
    sub->add_option("--seeds", o.seeds, "Number of initial seeds (0 = a fifth of the target size)")
        ->capture_default_str();
    sub->add_option("--q", o.q, "Probability of following each eligible link")->capture_default_str();
    sub->add_option("--max-waves", o.max_waves, "Maximum tracing waves (0 = unlimited)")->capture_default_str();
    sub->add_flag("--no-reseed", o.no_reseed, "Stop early instead of reseeding when a wave adds nobody");
    if (need_n) sub->add_option("--n", o.n, "Target number of distinct sampled units")->required();
}

void add_resample(CLI::App* sub, ResampleOpts& o) {
    sub->add_option("--mode", o.mode, "Resampling scheme: process or repeated")
        ->check(CLI::IsMember({"process", "repeated"}))
        ->capture_default_str();
    sub->add_option("--T", o.T, "Number of counted resamples")->capture_default_str();
    sub->add_option("--resample-size", o.resample_size, "Target resample size m (0 = a third of the sample)")
        ->capture_default_str();
    sub->add_option_function<std::size_t>(
        "--burn-in",
        [&o](std::size_t v) {
            o.burn_in = v;
            o.burn_in_set = true;
        },
        "Process mode: uncounted steps after ramp-up (default 10 * m)");
    sub->add_option("--reseed-rate", o.reseed_rate, "Process mode: per-slot reseeding probability")
        ->capture_default_str();
    sub->add_option("--freq-floor", o.freq_floor, "Lower bound on frequencies (0 = 1/(2T))")->capture_default_str();
    sub->add_option("--step-size", o.step_size, "Process mode: units removed and traced per step")
        ->capture_default_str();
    sub->add_option("--inner-seeds", o.inner_seeds, "Repeated mode: seeds per resample (0 = field seeds scaled by m/n)")
        ->capture_default_str();
    sub->add_option("--inner-waves", o.inner_waves, "Repeated mode: waves per resample (0 = same as --max-waves)")
        ->capture_default_str();
}

DesignConfig make_design(const DesignOpts& o) {
    DesignConfig d;
    d.kind = o.kind == "rerecruit" ? DesignKind::ReRecruit : DesignKind::Regular;
    d.seed_count = o.seeds != 0 ? o.seeds : std::max<std::size_t>(1, o.n / 5);
    d.link_prob = o.q;
    d.target_size = o.n;
    if (o.max_waves > 0) d.max_waves = o.max_waves;
    d.reseed_on_exhaustion = !o.no_reseed;
    return d;
}

ResampleConfig make_resample(const ResampleOpts& o, const DesignConfig& field, std::size_t units) {
    ResampleConfig r;
    r.mode = o.mode == "repeated" ? ResampleMode::Repeated : ResampleMode::Process;
    r.resamples = o.T;
    r.target_size = o.resample_size != 0 ? o.resample_size : std::max<std::size_t>(1, units / 3);
    if (o.burn_in_set) r.burn_in = o.burn_in;
    r.reseed_rate = o.reseed_rate;
    if (o.freq_floor > 0.0) r.frequency_floor = o.freq_floor;
    r.step_trace_count = o.step_size;
    r.step_remove_count = o.step_size;
    r.inner_design = scaled_inner_design(field, r.target_size);
    if (o.inner_seeds != 0) r.inner_design.seed_count = o.inner_seeds;
    if (o.inner_waves > 0) r.inner_design.max_waves = o.inner_waves;
    return r;
}

std::size_t worker_count(const std::string& threads) {
    if (threads == "AUTO" || threads == "auto") return 0;
    const auto v = text::parse_int(threads);
    if (!v || *v <= 0) throw ConfigError("--threads must be a positive integer or AUTO");
    return static_cast<std::size_t>(*v);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    for (const auto part : text::split(s, ',')) {
        const auto t = text::trim(part);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::ofstream open_output(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    return out;
}

// Merges a flat "key = value" file into the argument list. Keys already given
// on the command line are skipped; unknown keys are rejected.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].starts_with("--config=")) path = args[i].substr(9);
    }
    if (path.empty() || args.empty()) return args;

    CLI::App* sub = app.get_subcommand_ptr(args[0]).get();
    const auto contents = text::read_file(path);
    const auto lines = text::lines(contents);
    std::vector<std::string> merged = args;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = text::trim(lines[n]);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(path + ":" + std::to_string(n + 1) + ": expected 'key = value'");
        }
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        const std::string flag = "--" + key;
        if (key == "config" || sub->get_option_no_throw(flag) == nullptr) {
            throw ConfigError(path + ":" + std::to_string(n + 1) + ": unknown key '" + key + "'");
        }
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.starts_with(flag + "=");
        });
        if (!given) merged.push_back(flag + "=" + value);
    }
    return merged;
}

int cmd_sample(const CommonOpts& common, const DesignOpts& dopts, const std::string& edges,
               const std::string& attrs_path, bool directed, const std::string& missing, std::ostream& out) {
    const auto net = load_edge_list(edges, directed);
    const auto policy = missing == "error" ? MissingPolicy::Error : MissingPolicy::Zero;
    const auto attrs = attrs_path.empty() ? AttributeTable(net.node_count()) : load_attributes(attrs_path, net, policy);

    const auto design = make_design(dopts);
    auto rng = derive_stream(common.seed, 0);
    const auto rec = draw_sample(net, design, rng);
    const auto obs = observe(net, attrs, rec);

    auto events = open_output(common.out_dir, "events.csv");
    write_events(rec, net, events);
    auto sample_edges = open_output(common.out_dir, "sample_edges.txt");
    write_edge_list(obs.net(), sample_edges);
    auto degrees = open_output(common.out_dir, "degrees.csv");
    write_degrees(obs, degrees);
    auto sample_attrs = open_output(common.out_dir, "sample_attrs.csv");
    write_attributes(obs.values, obs.net(), sample_attrs);

    out << "sampled " << obs.unit_count() << " units in " << rec.events.size() << " events";
    if (rec.short_of_target) out << " (short of target " << design.target_size << ")";
    out << '\n';
    return 0;
}

FrequencyTable compute_frequencies(const ObservedData& obs, const CommonOpts& common, const DesignOpts& dopts,
                                   const ResampleOpts& ropts) {
    DesignOpts field = dopts;
    field.n = obs.unit_count();
    const auto cfg = make_resample(ropts, make_design(field), obs.unit_count());
    auto rng = derive_stream(common.seed, 1);
    return estimate_frequencies(obs.net(), cfg, rng);
}

int cmd_resample(const CommonOpts& common, const DesignOpts& dopts, const ResampleOpts& ropts,
                 const std::string& edges, const std::string& degrees, std::ostream& out) {
    const auto obs = read_observed(edges, degrees, "", MissingPolicy::Zero);
    const auto table = compute_frequencies(obs, common, dopts, ropts);
    auto file = open_output(common.out_dir, "freqs.csv");
    write_frequencies(table, obs.net(), file);
    out << "estimated frequencies for " << obs.unit_count() << " units (" << table.floored_count() << " floored)\n";
    return 0;
}

int cmd_estimate(const CommonOpts& common, const DesignOpts& dopts, const ResampleOpts& ropts,
                 const std::string& edges, const std::string& degrees, const std::string& attrs,
                 const std::string& freqs, const std::string& missing, const std::string& variables,
                 const std::string& estimators, double alpha, std::ostream& out) {
    const auto policy = missing == "error" ? MissingPolicy::Error : MissingPolicy::Zero;
    const auto obs = read_observed(edges, degrees, attrs, policy);

    std::vector<VariableSpec> vars;
    for (const auto& v : split_list(variables)) vars.push_back(VariableSpec::parse(v));
    if (vars.empty()) throw ConfigError("--variables is empty");
    std::vector<Estimator> ests;
    for (const auto& e : split_list(estimators)) ests.push_back(parse_estimator(e));
    if (ests.empty()) throw ConfigError("--estimators is empty");

    std::optional<WeightVector> f_weights;
    if (std::find(ests.begin(), ests.end(), Estimator::New) != ests.end()) {
        const auto table = freqs.empty() ? compute_frequencies(obs, common, dopts, ropts)
                                         : read_frequencies(freqs, obs.net());
        f_weights.emplace(table.f, WeightSource::Resampled);
    }

    auto file = open_output(common.out_dir, "estimates.csv");
    write_estimate_header(file);
    write_estimate_header(out);
    for (const auto& var : vars) {
        const auto y = extract_variable(obs, var);
        for (const auto est : ests) {
            const std::string tag(estimator_name(est));
            EstimateResult r;
            switch (est) {
                case Estimator::New: r = estimate(y, *f_weights, alpha, tag); break;
                case Estimator::Ybar: r = estimate(y, WeightVector::uniform(y.size()), alpha, tag); break;
                case Estimator::Vh: r = estimate(y, WeightVector::degree(obs.reported_degree), alpha, tag); break;
            }
            write_estimate_row(r, var.name(), file);
            write_estimate_row(r, var.name(), out);
        }
    }
    return 0;
}

struct SimOpts {
    std::string edges;
    std::string attrs;
    bool directed = false;
    std::string missing = "zero";
    std::size_t nodes = 1000;
    double mean_degree = 8.0;
    std::string degree_model = "heavy";
    double tail_exponent = 2.5;
    std::string bernoulli_cols = "attr30:0.3,attr10:0.1";
    std::string correlated = "risk:0.3:1.0";
    std::string variables = "degree,kconc:3,attr30,attr10,risk";
    std::string estimators = "new,ybar,vh";
    std::size_t reps = 200;
    double alpha = 0.05;
};

SyntheticSpec make_synthetic(const SimOpts& o) {
    SyntheticSpec s;
    s.nodes = o.nodes;
    s.mean_degree = o.mean_degree;
    s.model = o.degree_model == "uniform" ? DegreeModel::Uniform : DegreeModel::HeavyTailed;
    s.tail_exponent = o.tail_exponent;
    for (const auto& item : split_list(o.bernoulli_cols)) {
        const auto parts = text::split(item, ':');
        const auto p = parts.size() == 2 ? text::parse_double(parts[1]) : std::nullopt;
        if (!p) throw ConfigError("--bernoulli entries must look like name:p, got '" + item + "'");
        s.bernoulli.push_back({std::string(text::trim(parts[0])), *p});
    }
    if (!o.correlated.empty()) {
        const auto parts = text::split(o.correlated, ':');
        const auto base = parts.size() == 3 ? text::parse_double(parts[1]) : std::nullopt;
        const auto slope = parts.size() == 3 ? text::parse_double(parts[2]) : std::nullopt;
        if (!base || !slope) throw ConfigError("--correlated must look like name:base_p:slope");
        s.correlated = DegreeCorrelatedColumn{std::string(text::trim(parts[0])), *base, *slope};
    }
    return s;
}

int cmd_simulate(const CommonOpts& common, const DesignOpts& dopts, const ResampleOpts& ropts, const SimOpts& sopts,
                 std::ostream& out) {
    SimConfig cfg;
    cfg.edges_path = sopts.edges;
    cfg.attrs_path = sopts.attrs;
    cfg.directed = sopts.directed;
    cfg.missing = sopts.missing == "error" ? MissingPolicy::Error : MissingPolicy::Zero;
    cfg.synthetic = make_synthetic(sopts);
    cfg.design = make_design(dopts);
    cfg.resample = make_resample(ropts, cfg.design, dopts.n);
    for (const auto& v : split_list(sopts.variables)) cfg.variables.push_back(VariableSpec::parse(v));
    cfg.estimators.clear();
    for (const auto& e : split_list(sopts.estimators)) cfg.estimators.push_back(parse_estimator(e));
    cfg.reps = sopts.reps;
    cfg.alpha = sopts.alpha;
    cfg.master_seed = common.seed;
    cfg.threads = worker_count(common.threads);

    const auto report = run_simulation(cfg);
    auto report_file = open_output(common.out_dir, "report.csv");
    write_report_csv(report, report_file);
    auto coverage_file = open_output(common.out_dir, "coverage.csv");
    write_coverage_csv(report, coverage_file);
    auto parabola_file = open_output(common.out_dir, "parabola.csv");
    write_parabola_csv(report, parabola_file);
    auto hist_file = open_output(common.out_dir, "freq_hist.csv");
    write_freq_hist_csv(report, hist_file);
    print_summary(report, out);
    return 0;
}

int cmd_spatial(const CommonOpts& common, const std::string& grid_path, const std::string& adjacency,
                double threshold, std::ostream& out) {
    const auto grid = load_grid(grid_path);
    SpatialRule rule;
    rule.adjacency = adjacency == "queen" ? Adjacency::Queen : Adjacency::Rook;
    rule.threshold = threshold;
    const auto spatial = grid_to_network(grid, rule);

    auto edges = open_output(common.out_dir, "edges.txt");
    write_edge_list(spatial.net, edges);
    auto counts = open_output(common.out_dir, "counts.csv");
    write_attributes(spatial.attrs, spatial.net, counts);
    out << "converted " << grid.rows << "x" << grid.cols << " grid into " << spatial.net.link_count()
        << " directed links\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Snowball sampling designs, inclusion-frequency resampling and design-based estimation",
                 "snowball"};
    app.require_subcommand(1);

    CommonOpts common;
    DesignOpts dopts;
    ResampleOpts ropts;
    SimOpts sopts;
    std::string edges, attrs, degrees, freqs, grid, missing = "zero", adjacency = "rook";
    std::string variables = "degree", estimators = "new,ybar,vh";
    bool directed = false;
    double alpha = 0.05;
    double threshold = 1.0;

    auto* sample = app.add_subcommand("sample", "Draw one snowball sample from a population");
    add_common(sample, common);
    add_design(sample, dopts, true);
    sample->add_option("--edges", edges, "Population edge list")->required();
    sample->add_option("--attrs", attrs, "Population attribute CSV");
    sample->add_flag("--directed", directed, "Honour '->' one-way markers in the edge list");
    sample->add_option("--missing", missing, "Empty attribute cells: zero or error")
        ->check(CLI::IsMember({"zero", "error"}));

    auto* resample = app.add_subcommand("resample", "Estimate inclusion frequencies on a sample network");
    add_common(resample, common);
    add_design(resample, dopts, false);
    add_resample(resample, ropts);
    resample->add_option("--edges", edges, "Sample edge list")->required();
    resample->add_option("--degrees", degrees, "Degree CSV defining the sampled units")->required();

    auto* est = app.add_subcommand("estimate", "Population estimates with standard errors and intervals");
    add_common(est, common);
    add_design(est, dopts, false);
    add_resample(est, ropts);
    est->add_option("--edges", edges, "Sample edge list")->required();
    est->add_option("--degrees", degrees, "Degree CSV defining the sampled units")->required();
    est->add_option("--attrs", attrs, "Sample attribute CSV");
    est->add_option("--freqs", freqs, "Frequency CSV to use instead of resampling");
    est->add_option("--missing", missing, "Empty attribute cells: zero or error")
        ->check(CLI::IsMember({"zero", "error"}));
    est->add_option("--variables", variables, "Comma list: degree, kconc[:k], attribute names")
        ->capture_default_str();
    est->add_option("--estimators", estimators, "Comma list of new, ybar, vh")->capture_default_str();
    est->add_option("--alpha", alpha, "One minus the interval confidence level")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Repeated-sampling study of estimator bias, MSE and coverage");
    add_common(sim, common);
    add_design(sim, dopts, true);
    add_resample(sim, ropts);
    sim->add_option("--edges", sopts.edges, "Population edge list (synthetic population when omitted)");
    sim->add_option("--attrs", sopts.attrs, "Population attribute CSV");
    sim->add_flag("--directed", sopts.directed, "Honour '->' one-way markers in the edge list");
    sim->add_option("--missing", sopts.missing, "Empty attribute cells: zero or error")
        ->check(CLI::IsMember({"zero", "error"}));
    sim->add_option("--nodes", sopts.nodes, "Synthetic population size")->capture_default_str();
    sim->add_option("--mean-degree", sopts.mean_degree, "Synthetic mean degree")->capture_default_str();
    sim->add_option("--degree-model", sopts.degree_model, "Synthetic links: heavy or uniform")
        ->check(CLI::IsMember({"heavy", "uniform"}))
        ->capture_default_str();
    sim->add_option("--tail-exponent", sopts.tail_exponent, "Pareto exponent of heavy-tailed weights")
        ->capture_default_str();
    sim->add_option("--bernoulli", sopts.bernoulli_cols, "Independent binary columns, name:p,...")
        ->capture_default_str();
    sim->add_option("--correlated", sopts.correlated, "Degree-correlated column name:base_p:slope ('' for none)")
        ->capture_default_str();
    sim->add_option("--variables", sopts.variables, "Comma list: degree, kconc[:k], attribute names")
        ->capture_default_str();
    sim->add_option("--estimators", sopts.estimators, "Comma list of new, ybar, vh")->capture_default_str();
    sim->add_option("--reps", sopts.reps, "Number of replicate samples")->capture_default_str();
    sim->add_option("--alpha", sopts.alpha, "One minus the interval confidence level")->capture_default_str();

    auto* spatial = app.add_subcommand("spatial", "Convert a grid of plot counts into a network");
    add_common(spatial, common);
    spatial->add_option("--grid", grid, "Grid file: 'rows cols' then one line of counts per row")->required();
    spatial->add_option("--adjacency", adjacency, "rook or queen")->check(CLI::IsMember({"rook", "queen"}));
    spatial->add_option("--threshold", threshold, "Count at which a plot is occupied")->capture_default_str();

    try {
        auto merged = merge_config(args, app);
        std::vector<const char*> argv{"snowball"};
        for (const auto& a : merged) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (sample->parsed()) return cmd_sample(common, dopts, edges, attrs, directed, missing, out);
        if (resample->parsed()) return cmd_resample(common, dopts, ropts, edges, degrees, out);
        if (est->parsed()) {
            return cmd_estimate(common, dopts, ropts, edges, degrees, attrs, freqs, missing, variables, estimators,
                                alpha, out);
        }
        if (sim->parsed()) return cmd_simulate(common, dopts, ropts, sopts, out);
        if (spatial->parsed()) return cmd_spatial(common, grid, adjacency, threshold, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace snowball::cli
