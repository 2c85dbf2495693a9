#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netshield/allocate.hpp"
#include "netshield/costs.hpp"
#include "netshield/dynamics.hpp"
#include "netshield/errors.hpp"
#include "netshield/graph.hpp"
#include "netshield/heuristics.hpp"
#include "netshield/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace netshield;

namespace {

// A problem the user can fix on the command line or in the config; exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
}

bool passed(const CLI::App& cmd, const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

double scalar_field(const json& cfg, const std::string& key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg.at(key).is_number()) {
        throw UsageError("config field '" + key + "' must be a single number");
    }
    return cfg.at(key).get<double>();
}

/// Scalar-or-array numeric field: a single number is broadcast to `count`
/// entries, an array must have exactly `count` entries.
std::vector<double> number_list(const json& cfg, const std::string& key, int count,
                                double fallback) {
    if (!cfg.contains(key)) {
        return std::vector<double>(static_cast<std::size_t>(count), fallback);
    }
    const json& value = cfg.at(key);
    if (value.is_number()) {
        return std::vector<double>(static_cast<std::size_t>(count), value.get<double>());
    }
    if (value.is_array()) {
        std::vector<double> out;
        out.reserve(value.size());
        for (const json& v : value) {
            if (!v.is_number()) {
                throw UsageError("config field '" + key + "' must hold numbers only");
            }
            out.push_back(v.get<double>());
        }
        if (static_cast<int>(out.size()) != count) {
            throw UsageError("config field '" + key + "' must hold " + std::to_string(count) +
                             " numbers, got " + std::to_string(out.size()));
        }
        return out;
    }
    throw UsageError("config field '" + key + "' must be a number or an array of numbers");
}

std::vector<int> binary_list(const json& cfg, const std::string& key, int count, int fallback) {
    const std::vector<double> values = number_list(cfg, key, count, fallback);
    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0.0 && values[i] != 1.0) {
            throw UsageError("config field '" + key + "' entries must be 0 or 1");
        }
        out[i] = static_cast<int>(values[i]);
    }
    return out;
}

std::vector<ElementBounds> zip_bounds(const std::vector<double>& lo,
                                      const std::vector<double>& hi) {
    std::vector<ElementBounds> bounds(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) bounds[i] = {lo[i], hi[i]};
    return bounds;
}

Digraph require_graph(const json& cfg) {
    if (!cfg.contains("graph")) {
        throw UsageError("a graph file is required (--graph PATH or config key 'graph')");
    }
    return read_edge_list(cfg.at("graph").get<std::string>());
}

Parameterization parameterization_field(const json& cfg) {
    const std::string name = cfg.value("parameterization", "edge");
    if (name == "edge") return Parameterization::EdgeLevel;
    if (name == "node") return Parameterization::NodeLevel;
    throw UsageError("parameterization must be 'edge' or 'node', got '" + name + "'");
}

CostFamilyKind prevention_kind(const std::string& name) {
    if (name == "reciprocal-vaccine") return CostFamilyKind::ReciprocalVaccine;
    if (name == "workstation") return CostFamilyKind::Workstation;
    if (name == "custom") return CostFamilyKind::CustomPosynomial;
    throw UsageError("unknown prevention family '" + name +
                     "' (expected reciprocal-vaccine, workstation, or custom)");
}

CostFamilyKind correction_kind(const std::string& name) {
    if (name == "reciprocal-antidote") return CostFamilyKind::ReciprocalAntidote;
    if (name == "custom") return CostFamilyKind::CustomPosynomial;
    throw UsageError("unknown correction family '" + name +
                     "' (expected reciprocal-antidote or custom)");
}

std::vector<PosyTerm> terms_field(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) {
        throw UsageError("custom cost family needs config field '" + key + "'");
    }
    std::vector<PosyTerm> terms;
    for (const json& t : cfg.at(key)) {
        terms.push_back({t.at("coef").get<double>(), t.at("exponent").get<double>()});
    }
    return terms;
}

AllocationProblem problem_from_config(const json& cfg) {
    AllocationProblem p{require_graph(cfg)};
    p.parameterization = parameterization_field(cfg);
    const int n = p.graph.node_count();
    const int elements =
        p.parameterization == Parameterization::EdgeLevel ? p.graph.edge_count() : n;

    if (cfg.contains("beta") && !cfg.contains("beta_lo") && !cfg.contains("beta_hi")) {
        const std::vector<double> frozen = number_list(cfg, "beta", elements, 0.0);
        p.beta_bounds = zip_bounds(frozen, frozen);
    } else {
        p.beta_bounds = zip_bounds(number_list(cfg, "beta_lo", elements, 0.01),
                                   number_list(cfg, "beta_hi", elements, 0.5));
    }
    if (cfg.contains("delta") && !cfg.contains("delta_lo") && !cfg.contains("delta_hi")) {
        const std::vector<double> frozen = number_list(cfg, "delta", n, 0.0);
        p.delta_bounds = zip_bounds(frozen, frozen);
    } else if (cfg.contains("delta_lo") || cfg.contains("delta_hi")) {
        p.delta_bounds = zip_bounds(number_list(cfg, "delta_lo", n, 0.2),
                                    number_list(cfg, "delta_hi", n, 0.7));
    } else {
        p.delta_bounds = frozen_bounds(n, 0.3);
    }
    p.cap = scalar_field(cfg, "cap", 1.0);
    p.budget = scalar_field(cfg, "budget", 0.0);
    p.tol = scalar_field(cfg, "tol", 1e-7);
    p.prevention = prevention_kind(cfg.value("prevention", "reciprocal-vaccine"));
    p.correction = correction_kind(cfg.value("correction", "reciprocal-antidote"));
    if (p.prevention == CostFamilyKind::CustomPosynomial) {
        p.prevention_terms = terms_field(cfg, "prevention_terms");
    }
    if (p.correction == CostFamilyKind::CustomPosynomial) {
        p.correction_terms = terms_field(cfg, "correction_terms");
    }
    return p;
}

SpreadingParams params_from_config(const json& cfg, const Digraph& g) {
    const std::vector<double> delta = number_list(cfg, "delta", g.node_count(), 0.3);
    if (parameterization_field(cfg) == Parameterization::NodeLevel) {
        return SpreadingParams::node_rates(g, number_list(cfg, "beta", g.node_count(), 0.1),
                                           delta);
    }
    return SpreadingParams::edge_rates(g, number_list(cfg, "beta", g.edge_count(), 0.1), delta);
}

std::vector<Centrality> strategy_list(const json& cfg) {
    if (!cfg.contains("strategies")) {
        return {Centrality::OutDegree, Centrality::TotalDegree, Centrality::PageRankForward,
                Centrality::PageRankSymmetrized};
    }
    std::vector<Centrality> out;
    for (const json& name : cfg.at("strategies")) {
        try {
            out.push_back(centrality_from_name(name.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (out.empty()) throw UsageError("config field 'strategies' must not be empty");
    return out;
}

struct Sweep {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 0;
};

double parse_number(std::string_view text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw UsageError("not a number: '" + std::string(text) + "'");
    return value;
}

Sweep parse_sweep(const std::string& text) {
    const UsageError bad("sweep expects 'lo:hi:steps' with finite 0 <= lo <= hi and steps >= 2, got '" +
                         text + "'");
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) throw bad;
    Sweep s;
    try {
        s.lo = parse_number(std::string_view(text).substr(0, c1));
        s.hi = parse_number(std::string_view(text).substr(c1 + 1, c2 - c1 - 1));
        const std::string_view steps = std::string_view(text).substr(c2 + 1);
        const char* end = steps.data() + steps.size();
        const auto [ptr, ec] = std::from_chars(steps.data(), end, s.steps);
        if (ec != std::errc() || ptr != end) throw bad;
    } catch (const UsageError&) {
        throw bad;
    }
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || s.lo < 0.0 || s.hi < s.lo || s.steps < 2) {
        throw bad;
    }
    return s;
}

std::vector<double> linspace(const Sweep& s) {
    std::vector<double> points(static_cast<std::size_t>(s.steps));
    for (int i = 0; i < s.steps; ++i) {
        points[static_cast<std::size_t>(i)] =
            s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(s.steps - 1);
    }
    return points;
}

fs::path output_dir(const json& cfg) {
    const fs::path dir = cfg.value("out", std::string("."));
    fs::create_directories(dir);
    return dir;
}

std::string hash_hex(std::uint64_t hash) {
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

/// Every command writes a metadata sidecar: the command name, the format
/// version, a fingerprint of the fully resolved configuration, and the seed.
/// Deliberately no timestamps — identical inputs must give identical bytes.
/// The output directory is plumbing, not configuration, so it is excluded
/// from the fingerprint.
void write_metadata(const fs::path& dir, const std::string& command, const json& cfg,
                    const json& extras = json::object()) {
    json hashed = cfg;
    hashed.erase("out");
    json meta;
    meta["command"] = command;
    meta["version"] = kFormatVersion;
    meta["config_hash"] = hash_hex(fnv1a64(hashed.dump()));
    meta["seed"] = cfg.value("seed", std::uint64_t{0});
    for (const auto& [key, value] : extras.items()) meta[key] = value;
    write_text((dir / "metadata.json").string(), meta.dump(2) + "\n");
}

int run_solve(const json& cfg) {
    const AllocationProblem problem = problem_from_config(cfg);
    const AllocationResult result = solve(problem);
    const CertificationReport cert = certify(result, problem);

    const fs::path dir = output_dir(cfg);
    write_text((dir / "result.json").string(), format_result_json(result, cert));
    write_text((dir / "scatter.csv").string(), format_scatter_csv(problem, result));

    if (cfg.contains("sweep")) {
        const Sweep sweep = parse_sweep(cfg.at("sweep").get<std::string>());
        std::string csv = "budget,epsilon_star\n";
        for (double budget : linspace(sweep)) {
            AllocationProblem sub = problem;
            sub.budget = budget;
            csv += format_double(budget) + "," + format_double(solve(sub).epsilon_star) + "\n";
        }
        write_text((dir / "sweep.csv").string(), csv);
    }
    write_metadata(dir, "solve", cfg);

    std::cout << "epsilon_star = " << format_double(result.epsilon_star) << ", spend "
              << format_double(result.total_spend) << " of budget "
              << format_double(problem.budget) << "\n";
    if (!cert.certified) {
        std::cerr << "netshield solve: certification failed: " << cert.detail << "\n";
        return 4;
    }
    std::cout << "certificate: eigenvalue gap " << format_double(cert.eigenvalue_gap) << "\n";
    return 0;
}

int run_simulate(const json& cfg) {
    const Digraph g = require_graph(cfg);
    const SpreadingParams params = params_from_config(cfg, g);
    const std::vector<double> p0 = number_list(cfg, "p0", g.node_count(), 1.0);
    const double t_end = scalar_field(cfg, "t_end", 10.0);
    const double step = scalar_field(cfg, "step", 0.0);

    const Trajectory trajectory = meanfield_simulate(params, p0, t_end, step);
    const double rate = fit_decay_rate(trajectory);

    const fs::path dir = output_dir(cfg);
    write_text((dir / "trajectory.csv").string(), format_trajectory_csv(trajectory));
    json summary;
    summary["rows"] = trajectory.times.size();
    summary["t_end"] = t_end;
    summary["fitted_decay_rate"] = std::isfinite(rate) ? json(rate) : json("infinite");
    write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
    write_metadata(dir, "simulate", cfg,
                   {{"step", step > 0.0 ? step : default_step(params)}});

    std::cout << "simulated " << trajectory.times.size() << " states to t = "
              << format_double(t_end) << ", fitted decay rate "
              << (std::isfinite(rate) ? format_double(rate) : std::string("infinite")) << "\n";
    return 0;
}

int run_gillespie(const json& cfg) {
    const Digraph g = require_graph(cfg);
    const SpreadingParams params = params_from_config(cfg, g);
    const std::vector<int> x0 = binary_list(cfg, "x0", g.node_count(), 1);
    const double t_end = scalar_field(cfg, "t_end", 10.0);
    const std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    const int trials = cfg.value("trials", 0);

    const Trajectory trajectory = stochastic_simulate(params, x0, t_end, seed);

    const fs::path dir = output_dir(cfg);
    write_text((dir / "trajectory.csv").string(), format_trajectory_csv(trajectory));
    write_text((dir / "events.csv").string(), format_event_csv(trajectory));

    bool extinct = true;
    for (double v : trajectory.values.back()) extinct = extinct && v == 0.0;
    json summary;
    summary["final_time"] = trajectory.times.back();
    summary["event_count"] = trajectory.events.size();
    summary["extinct"] = extinct;
    if (trials > 0) {
        const ExtinctionStats stats = extinction_fraction(params, x0, t_end, trials, seed);
        summary["extinction"] = {{"trials", stats.trials},
                                 {"extinct", stats.extinct},
                                 {"fraction", stats.fraction}};
    }
    write_text((dir / "summary.json").string(), summary.dump(2) + "\n");
    write_metadata(dir, "gillespie", cfg, {{"trials", trials}});

    std::cout << trajectory.events.size() << " events to t = "
              << format_double(trajectory.times.back()) << (extinct ? ", extinct" : "") << "\n";
    return 0;
}

int run_heuristics(const json& cfg) {
    const Digraph g = require_graph(cfg);
    const double alpha = scalar_field(cfg, "alpha", 0.1);
    const double budget = scalar_field(cfg, "budget", 0.0);

    const fs::path dir = output_dir(cfg);
    write_text((dir / "centrality.csv").string(), format_centrality_csv(g, alpha));

    if (budget > 0.0) {
        const double beta_lo = scalar_field(cfg, "beta_lo", 0.01);
        const double beta_hi = scalar_field(cfg, "beta_hi", 0.5);
        const double delta = scalar_field(cfg, "delta", 0.3);
        std::string csv = "strategy";
        for (int i = 0; i < g.node_count(); ++i) csv += ",rate_node_" + std::to_string(i);
        csv += ",epsilon\n";
        for (Centrality c : strategy_list(cfg)) {
            GreedyStrategy strategy;
            strategy.centrality = c;
            strategy.alpha = alpha;
            strategy.k = cfg.value("k", -1);
            strategy.budget = budget;
            strategy.spend_remainder = cfg.value("spend_remainder", false);
            const std::vector<double> rates = greedy_allocate(g, strategy, beta_lo, beta_hi);
            csv += centrality_name(c);
            for (double r : rates) csv += "," + format_double(r);
            csv += "," + format_double(effective_objective(g, rates, delta)) + "\n";
        }
        write_text((dir / "greedy.csv").string(), csv);
    }
    write_metadata(dir, "heuristics", cfg);
    std::cout << "wrote centrality table for " << g.node_count() << " nodes"
              << (budget > 0.0 ? " and greedy allocations" : "") << "\n";
    return 0;
}

int run_compare(const json& cfg) {
    const Digraph g = cfg.contains("graph")
                          ? read_edge_list(cfg.at("graph").get<std::string>())
                          : worst_case_graph(cfg.value("sources", 3), cfg.value("cycle_length", 6));
    const double beta_lo = scalar_field(cfg, "beta_lo", 0.01);
    const double beta_hi = scalar_field(cfg, "beta_hi", 0.5);
    const double delta = scalar_field(cfg, "delta", 0.3);
    const double budget = scalar_field(cfg, "budget", 3.0);
    const double alpha = scalar_field(cfg, "alpha", 0.1);

    std::vector<GreedyStrategy> strategies;
    for (Centrality c : strategy_list(cfg)) {
        GreedyStrategy strategy;
        strategy.centrality = c;
        strategy.alpha = alpha;
        strategy.k = cfg.value("k", -1);
        strategy.budget = budget;
        strategy.spend_remainder = cfg.value("spend_remainder", false);
        strategies.push_back(strategy);
    }
    const EfficiencyReport report =
        compare_strategies(g, strategies, beta_lo, beta_hi, delta, budget);

    const fs::path dir = output_dir(cfg);
    write_text((dir / "comparison.csv").string(), format_comparison_csv(report));

    if (cfg.contains("sweep")) {
        const Sweep sweep = parse_sweep(cfg.at("sweep").get<std::string>());
        std::string csv = "budget,epsilon_star\n";
        for (double b : linspace(sweep)) {
            const EfficiencyReport point = compare_strategies(g, {}, beta_lo, beta_hi, delta, b);
            csv += format_double(b) + "," + format_double(point.optimum_epsilon) + "\n";
        }
        write_text((dir / "sweep.csv").string(), csv);
    }
    write_metadata(dir, "compare", cfg);

    for (const StrategyOutcome& s : report.strategies) {
        std::cout << s.name << ": epsilon = " << format_double(s.epsilon)
                  << ", efficiency = " << format_double(s.efficiency) << "\n";
    }
    std::cout << "optimum: epsilon = " << format_double(report.optimum_epsilon)
              << ", efficiency = 1\n";
    return 0;
}

int run_gen_worstcase(const json& cfg) {
    const int sources = cfg.value("sources", 3);
    const int cycle_length = cfg.value("cycle_length", 6);
    const Digraph g = worst_case_graph(sources, cycle_length);

    const fs::path dir = output_dir(cfg);
    write_edge_list((dir / "graph.txt").string(), g);
    write_metadata(dir, "gen-worstcase", cfg);

    std::cout << "wrote " << g.node_count() << "-node, " << g.edge_count()
              << "-edge worst-case graph\n";
    return 0;
}

int run_gseiv_check(const json& cfg) {
    const Digraph g = require_graph(cfg);
    const int n = g.node_count();
    const json sub = cfg.value("gseiv", json::object());
    const GseivParams params(g, number_list(sub, "beta_e", n, 0.0),
                             number_list(sub, "beta_i", n, 0.0),
                             number_list(sub, "epsilon", n, 0.5),
                             number_list(sub, "delta", n, 0.5),
                             number_list(sub, "theta", n, 0.0),
                             number_list(sub, "gamma", n, 0.5));
    const GseivStability verdict = gseiv_is_stable(params);

    const fs::path dir = output_dir(cfg);
    json out;
    out["stable"] = verdict.stable;
    out["abscissa"] = verdict.abscissa;
    write_text((dir / "verdict.json").string(), out.dump(2) + "\n");
    write_metadata(dir, "gseiv-check", cfg);

    std::cout << (verdict.stable ? "stable" : "unstable") << " (abscissa "
              << format_double(verdict.abscissa) << ")\n";
    return 0;
}

struct CommandFlags {
    std::string config;
    std::string graph;
    std::string out;
    std::string sweep;
    double budget = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> strategies;
    int sources = 0;
    int cycle_length = 0;
};

/// Folds the flags the user actually passed into the config document, so a
/// flag always wins over the file and the file over the built-in default.
json resolve_config(const CLI::App& cmd, const CommandFlags& f) {
    json cfg = load_config(f.config);
    if (passed(cmd, "--graph")) cfg["graph"] = f.graph;
    if (passed(cmd, "--out")) cfg["out"] = f.out;
    if (passed(cmd, "--budget")) cfg["budget"] = f.budget;
    if (passed(cmd, "--tol")) cfg["tol"] = f.tol;
    if (passed(cmd, "--seed")) cfg["seed"] = f.seed;
    if (passed(cmd, "--sweep")) cfg["sweep"] = f.sweep;
    if (passed(cmd, "--strategy")) cfg["strategies"] = f.strategies;
    if (passed(cmd, "--sources")) cfg["sources"] = f.sources;
    if (passed(cmd, "--cycle-length")) cfg["cycle_length"] = f.cycle_length;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"netshield: certified allocation of protection resources on weighted digraphs"};
    app.set_version_flag("--version", kFormatVersion);
    app.require_subcommand(1);

    const auto add_config = [](CLI::App* cmd, CommandFlags& f) {
        cmd->add_option("--config", f.config, "JSON config file");
        cmd->add_option("--out", f.out, "output directory (default '.')");
    };
    const auto add_graph = [](CLI::App* cmd, CommandFlags& f) {
        cmd->add_option("--graph", f.graph, "edge-list graph file");
    };

    int status = 0;
    CommandFlags f_solve, f_simulate, f_gillespie, f_heuristics, f_compare, f_gen, f_gseiv;

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "Solve the allocation problem and certify the optimum");
    add_config(solve_cmd, f_solve);
    add_graph(solve_cmd, f_solve);
    solve_cmd->add_option("--budget", f_solve.budget, "total protection budget");
    solve_cmd->add_option("--tol", f_solve.tol, "solver tolerance");
    solve_cmd->add_option("--sweep", f_solve.sweep, "budget sweep lo:hi:steps -> sweep.csv");
    solve_cmd->callback([&] { status = run_solve(resolve_config(*solve_cmd, f_solve)); });

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Integrate the mean-field spreading dynamics");
    add_config(simulate_cmd, f_simulate);
    add_graph(simulate_cmd, f_simulate);
    simulate_cmd->callback(
        [&] { status = run_simulate(resolve_config(*simulate_cmd, f_simulate)); });

    CLI::App* gillespie_cmd =
        app.add_subcommand("gillespie", "Run the exact stochastic simulation");
    add_config(gillespie_cmd, f_gillespie);
    add_graph(gillespie_cmd, f_gillespie);
    gillespie_cmd->add_option("--seed", f_gillespie.seed, "random seed");
    gillespie_cmd->callback(
        [&] { status = run_gillespie(resolve_config(*gillespie_cmd, f_gillespie)); });

    CLI::App* heuristics_cmd =
        app.add_subcommand("heuristics", "Export centrality tables and greedy allocations");
    add_config(heuristics_cmd, f_heuristics);
    add_graph(heuristics_cmd, f_heuristics);
    heuristics_cmd->add_option("--budget", f_heuristics.budget, "greedy protection budget");
    heuristics_cmd->add_option("--strategy", f_heuristics.strategies,
                               "centrality measure (repeatable)");
    heuristics_cmd->callback(
        [&] { status = run_heuristics(resolve_config(*heuristics_cmd, f_heuristics)); });

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Race greedy strategies against the certified optimum");
    add_config(compare_cmd, f_compare);
    add_graph(compare_cmd, f_compare);
    compare_cmd->add_option("--budget", f_compare.budget, "protection budget");
    compare_cmd->add_option("--strategy", f_compare.strategies,
                            "centrality measure (repeatable)");
    compare_cmd->add_option("--sweep", f_compare.sweep, "budget sweep lo:hi:steps -> sweep.csv");
    compare_cmd->callback([&] { status = run_compare(resolve_config(*compare_cmd, f_compare)); });

    CLI::App* gen_cmd =
        app.add_subcommand("gen-worstcase", "Generate the sources-into-cycle worst-case graph");
    add_config(gen_cmd, f_gen);
    gen_cmd->add_option("--sources", f_gen.sources, "number of source nodes");
    gen_cmd->add_option("--cycle-length", f_gen.cycle_length, "cycle length");
    gen_cmd->callback([&] { status = run_gen_worstcase(resolve_config(*gen_cmd, f_gen)); });

    CLI::App* gseiv_cmd =
        app.add_subcommand("gseiv-check", "Test disease-free stability of a G-SEIV instance");
    add_config(gseiv_cmd, f_gseiv);
    add_graph(gseiv_cmd, f_gseiv);
    gseiv_cmd->callback([&] { status = run_gseiv_check(resolve_config(*gseiv_cmd, f_gseiv)); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "netshield: " << e.what() << "\n";
        return 1;
    } catch (const InfeasibleError& e) {
        std::cerr << "netshield: infeasible: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "netshield: solver failure: " << e.what() << "\n";
        return 3;
    } catch (const CertificationError& e) {
        std::cerr << "netshield: certification failed: " << e.what() << "\n";
        return 4;
    } catch (const json::exception& e) {
        std::cerr << "netshield: config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "netshield: " << e.what() << "\n";
        return 1;
    }
    return status;
}
