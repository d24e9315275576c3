#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "graphbayes/belief.hpp"
#include "graphbayes/graph_core.hpp"
#include "graphbayes/inference.hpp"
#include "graphbayes/random.hpp"
#include "graphbayes/sampling_eval.hpp"
#include "graphbayes/signal_io.hpp"
#include "graphbayes/simulate.hpp"

namespace graphbayes::cli {

namespace {

/// Command-line misuse detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        parts.emplace_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

long long to_int(const std::string& s, const std::string& what) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad " + what + ": '" + s + "'");
    return v;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad " + what + ": '" + s + "'");
    }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    file << text;
    if (!file) throw std::runtime_error("failed writing " + path);
}

struct GraphInput {
    std::string path;
    bool one_based = false;
};

void add_graph_options(CLI::App* cmd, GraphInput& input, bool required = true) {
    auto* opt = cmd->add_option("graph", input.path, "Edge-list file (`u v` per line)");
    if (required) opt->required();
    cmd->add_flag("--one-based", input.one_based, "Node ids in input files start at 1");
}

SamplingOperator parse_nodes(const std::string& text, int n) {
    if (text == "all") return SamplingOperator::all(n);
    std::vector<NodeId> nodes;
    for (auto& tok : split(text, ',')) {
        if (tok.empty()) continue;
        nodes.push_back(static_cast<NodeId>(to_int(tok, "node id")));
    }
    if (nodes.empty()) throw UsageError("--nodes lists no nodes");
    return SamplingOperator(n, std::move(nodes));
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    GraphInput graph;
    std::string signal_path;
    double sigma2 = 1.0;
    double eps = 0.0;
    std::string nodes = "all";
    bool noise_free = false;
    std::string prior = "smooth";
    double prior_sigma2 = 0.0;
    std::string out;
};

GaussianBelief make_prior(const std::string& prior, const Matrix& lap, double eps, double prior_sigma2) {
    if (prior == "smooth") return smoothness_prior(lap, eps);
    const std::string tag = "bandlimit:";
    if (prior.rfind(tag, 0) == 0) {
        const double b = to_double(prior.substr(tag.size()), "bandlimit");
        const Spectrum spectrum = spectral_decomposition(lap);
        return subspace_prior(bandlimit_basis(spectrum, b), prior_sigma2, eps);
    }
    throw UsageError("unknown prior '" + prior + "' (expected smooth or bandlimit:<b>)");
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
    const Graph g = load_edge_list_file(a.graph.path, a.graph.one_based);
    const SparseSignal signal = load_signal_csv(a.signal_path, a.graph.one_based);
    const int n = g.node_count();
    for (const auto& [node, value] : signal) {
        if (node >= n) throw UsageError("signal node " + std::to_string(node) + " outside graph");
    }
    const SamplingOperator sampling = parse_nodes(a.nodes, n);
    Vector observed(sampling.size());
    for (int j = 0; j < sampling.size(); ++j) {
        const auto it = signal.find(sampling.nodes()[j]);
        if (it == signal.end()) {
            throw UsageError("signal file has no value for node " + std::to_string(sampling.nodes()[j]));
        }
        observed[j] = it->second;
    }

    const Matrix lap = laplacian(g);
    const GaussianBelief prior = make_prior(a.prior, lap, a.eps, a.prior_sigma2);
    const double sigma2 = a.noise_free ? 0.0 : a.sigma2;
    const PosteriorSummary ps = fuse(prior, partial_observation(sampling, observed, sigma2));
    const Vector variances = node_variances(ps);

    std::string text = "node,mean,variance\n";
    for (int i = 0; i < n; ++i) {
        text += fmt::format("{},{},{}\n", i + (a.graph.one_based ? 1 : 0), format_number(ps.mean[i]),
                            format_number(variances[i]));
    }
    write_output(a.out, text, out);
    return kExitOk;
}

// ------------------------------------------------------------- uncertainty

struct UncertaintyArgs {
    GraphInput graph;
    double sigma2 = 1.0;
    double eps = 0.0;
    std::string direction;
};

Vector parse_direction(const std::string& text, const Matrix& lap, bool one_based) {
    const auto n = lap.rows();
    if (text.rfind("node:", 0) == 0) {
        const long long i = to_int(text.substr(5), "node index") - (one_based ? 1 : 0);
        if (i < 0 || i >= n) throw UsageError("node index out of range");
        return Vector::Unit(n, i);
    }
    if (text.rfind("eig:", 0) == 0) {
        const long long i = to_int(text.substr(4), "eigenvector index");
        if (i < 0 || i >= n) throw UsageError("eigenvector index out of range");
        return spectral_decomposition(lap).basis.col(i);
    }
    const auto parts = split(text, ',');
    if (static_cast<Eigen::Index>(parts.size()) != n) {
        throw UsageError(fmt::format("direction has {} entries, graph has {} nodes", parts.size(), n));
    }
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z[i] = to_double(parts[i], "direction entry");
    if (!z.allFinite()) throw UsageError("direction must be finite");
    if (z.norm() == 0.0) throw UsageError("direction must be non-zero");
    return z;
}

int cmd_uncertainty(const UncertaintyArgs& a, std::ostream& out) {
    const Graph g = load_edge_list_file(a.graph.path, a.graph.one_based);
    const Matrix lap = laplacian(g);
    const Vector z = parse_direction(a.direction, lap, a.graph.one_based);
    const int n = g.node_count();
    const PosteriorSummary ps = fuse(smoothness_prior(lap, a.eps), full_observation(Vector::Zero(n), a.sigma2));
    out << format_number(directional_uncertainty(ps, z)) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    GraphInput graph;
    std::string grid;
    std::string rgg;
    std::string nodes;
    double sigma2 = 3.0;
    double eps = 1e-6;
    int trials = 100;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
};

Graph simulation_graph(const SimulateArgs& a) {
    const int sources = !a.graph.path.empty() + !a.grid.empty() + !a.rgg.empty();
    if (sources != 1) throw UsageError("give exactly one of: graph file, --grid WxH, --rgg n,r");
    if (!a.graph.path.empty()) return load_edge_list_file(a.graph.path, a.graph.one_based);
    if (!a.grid.empty()) {
        const auto parts = split(a.grid, 'x');
        if (parts.size() != 2) throw UsageError("--grid expects WxH");
        return grid_graph(static_cast<int>(to_int(parts[0], "grid width")),
                          static_cast<int>(to_int(parts[1], "grid height")));
    }
    const auto parts = split(a.rgg, ',');
    if (parts.size() != 2) throw UsageError("--rgg expects n,r");
    // The graph draws from its own stream so it never overlaps trial streams.
    return random_geometric_graph(static_cast<int>(to_int(parts[0], "rgg node count")),
                                  to_double(parts[1], "rgg radius"),
                                  stream_seed(a.seed, ~std::uint64_t{0}));
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    if (a.trials < 1) throw UsageError("--trials must be at least 1");
    if (!(a.eps > 0.0)) throw UsageError("--eps must be positive to draw from the prior");
    if (!(a.sigma2 >= 0.0)) throw UsageError("--sigma2 must be non-negative");
    ExperimentConfig cfg;
    cfg.graph = simulation_graph(a);
    cfg.eps = a.eps;
    cfg.sigma2 = a.sigma2;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    if (!a.nodes.empty()) cfg.sampling = parse_nodes(a.nodes, cfg.graph.node_count());
    const ExperimentReport report = run_calibration(cfg, a.threads);
    write_output(a.out, format_report_csv(report), out);
    if (!a.out.empty()) {
        out << fmt::format("nodes={} median_ratio={} within_15pct={}\n", report.mse.size(),
                           format_number(report.median_ratio()),
                           format_number(report.fraction_within(0.15)));
    }
    return kExitOk;
}

// ----------------------------------------------------------- sample-select

struct SelectArgs {
    GraphInput graph;
    int budget = 1;
    double sigma2 = 1.0;
    double eps = 0.0;
    std::string metric = "trace";
};

int cmd_sample_select(const SelectArgs& a, std::ostream& out) {
    const Graph g = load_edge_list_file(a.graph.path, a.graph.one_based);
    const int n = g.node_count();
    if (a.budget < 1 || a.budget > n) {
        throw UsageError(fmt::format("--budget must lie in [1, {}]", n));
    }
    if (!(a.sigma2 >= 0.0)) throw UsageError("--sigma2 must be non-negative");
    const CovarianceMetric metric = parse_metric(a.metric);
    const GaussianBelief prior = smoothness_prior(laplacian(g), a.eps);
    const SamplingOperator chosen = greedy_select(prior, a.budget, a.sigma2, metric);
    const MetricValue value = covariance_metric(sampling_posterior(prior, chosen, a.sigma2), metric);

    std::string ids;
    for (NodeId id : chosen.nodes()) {
        if (!ids.empty()) ids += ' ';
        ids += std::to_string(id + (a.graph.one_based ? 1 : 0));
    }
    out << "selected: " << ids << '\n';
    out << metric_name(metric) << ": " << format_number(value.value) << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian estimation and uncertainty of graph signals", "graphbayes"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Posterior mean and node variances");
    add_graph_options(estimate, est.graph);
    estimate->add_option("signal", est.signal_path, "Observed signal CSV (`node,value`)")->required();
    auto* sigma_opt = estimate->add_option("--sigma2", est.sigma2, "Observation noise variance")
                          ->check(CLI::NonNegativeNumber);
    estimate->add_option("--eps", est.eps, "Prior regularization eps")->check(CLI::NonNegativeNumber);
    estimate->add_option("--nodes", est.nodes, "Sampled node ids, comma separated, or `all`");
    estimate->add_flag("--noise-free", est.noise_free, "Exact observations")->excludes(sigma_opt);
    estimate->add_option("--prior", est.prior, "smooth | bandlimit:<b>");
    estimate->add_option("--prior-sigma2", est.prior_sigma2,
                         "Relaxed subspace prior variance (0 = exact subspace)")
        ->check(CLI::NonNegativeNumber);
    estimate->add_option("--out", est.out, "Output CSV (default stdout)");

    UncertaintyArgs unc;
    auto* uncertainty = app.add_subcommand("uncertainty", "Posterior variance along a direction");
    add_graph_options(uncertainty, unc.graph);
    uncertainty->add_option("--sigma2", unc.sigma2, "Observation noise variance")->check(CLI::NonNegativeNumber);
    uncertainty->add_option("--eps", unc.eps, "Prior regularization eps")->check(CLI::NonNegativeNumber);
    uncertainty->add_option("--direction", unc.direction, "v1,v2,... | node:<i> | eig:<i>")->required();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo calibration of posterior variance");
    add_graph_options(simulate, sim.graph, false);
    simulate->add_option("--grid", sim.grid, "Grid graph WxH");
    simulate->add_option("--rgg", sim.rgg, "Random geometric graph n,r");
    simulate->add_option("--nodes", sim.nodes, "Observe only these node ids");
    simulate->add_option("--sigma2", sim.sigma2, "Observation noise variance");
    simulate->add_option("--eps", sim.eps, "Prior regularization eps");
    simulate->add_option("--trials", sim.trials, "Number of trials");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--threads", sim.threads, "Worker threads (0 = hardware)");
    simulate->add_option("--out", sim.out, "Output CSV (default stdout)");

    SelectArgs sel;
    auto* select = app.add_subcommand("sample-select", "Greedy covariance-driven sampling set");
    add_graph_options(select, sel.graph);
    select->add_option("--budget", sel.budget, "Number of nodes to select")->required();
    select->add_option("--sigma2", sel.sigma2, "Observation noise variance");
    select->add_option("--eps", sel.eps, "Prior regularization eps")->check(CLI::NonNegativeNumber);
    select->add_option("--metric", sel.metric, "trace | logdet | maxeig");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (estimate->parsed()) return cmd_estimate(est, out);
        if (uncertainty->parsed()) return cmd_uncertainty(unc, out);
        if (simulate->parsed()) return cmd_simulate(sim, out);
        if (select->parsed()) return cmd_sample_select(sel, out);
    } catch (const InconsistentConstraintsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInconsistent;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace graphbayes::cli
