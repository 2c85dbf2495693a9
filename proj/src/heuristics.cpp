#include "netshield/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netshield/costs.hpp"
#include "netshield/dynamics.hpp"
#include "netshield/errors.hpp"
#include "netshield/spectral.hpp"

namespace netshield {

std::string centrality_name(Centrality c) {
    switch (c) {
        case Centrality::OutDegree: return "out-degree";
        case Centrality::InDegree: return "in-degree";
        case Centrality::TotalDegree: return "total-degree";
        case Centrality::PageRankForward: return "pagerank-forward";
        case Centrality::PageRankReverse: return "pagerank-reverse";
        case Centrality::PageRankSymmetrized: return "pagerank-symmetrized";
    }
    throw std::invalid_argument("centrality_name: unknown measure");
}

Centrality centrality_from_name(const std::string& name) {
    for (Centrality c : {Centrality::OutDegree, Centrality::InDegree, Centrality::TotalDegree,
                         Centrality::PageRankForward, Centrality::PageRankReverse,
                         Centrality::PageRankSymmetrized}) {
        if (centrality_name(c) == name) return c;
    }
    throw std::invalid_argument("centrality_from_name: unknown measure '" + name + "'");
}

std::vector<double> centrality_scores(const Digraph& g, Centrality c, double alpha) {
    switch (c) {
        case Centrality::OutDegree: return g.weighted_degrees().out;
        case Centrality::InDegree: return g.weighted_degrees().in;
        case Centrality::TotalDegree: {
            WeightedDegrees d = g.weighted_degrees();
            for (std::size_t i = 0; i < d.in.size(); ++i) d.in[i] += d.out[i];
            return d.in;
        }
        case Centrality::PageRankForward: return pagerank(g, alpha, PageRankMode::Forward);
        case Centrality::PageRankReverse: return pagerank(g, alpha, PageRankMode::Reverse);
        case Centrality::PageRankSymmetrized:
            return pagerank(g, alpha, PageRankMode::Symmetrized);
    }
    throw std::invalid_argument("centrality_scores: unknown measure");
}

std::vector<double> greedy_allocate(const Digraph& g, const GreedyStrategy& strategy,
                                    double beta_lo, double beta_hi) {
    if (!(beta_lo > 0.0) || !(beta_lo <= beta_hi) || !std::isfinite(beta_hi)) {
        throw std::invalid_argument("greedy_allocate: need 0 < beta_lo <= beta_hi");
    }
    const int n = g.node_count();
    int k = strategy.k;
    double remainder = 0.0;
    if (k < 0) {
        if (!(strategy.budget >= 0.0) || !std::isfinite(strategy.budget)) {
            throw std::invalid_argument("greedy_allocate: budget must be finite and nonnegative");
        }
        // Normalized convention: fully protecting one node costs exactly 1.
        k = static_cast<int>(std::floor(strategy.budget + 1e-12));
        remainder = strategy.budget - static_cast<double>(k);
        if (remainder < 1e-12) remainder = 0.0;
    }
    if (k > n) throw std::invalid_argument("greedy_allocate: cannot protect more nodes than exist");

    const std::vector<double> score = centrality_scores(g, strategy.centrality, strategy.alpha);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });

    std::vector<double> rates(static_cast<std::size_t>(n), beta_hi);
    for (int r = 0; r < k; ++r) {
        rates[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = beta_lo;
    }
    if (strategy.spend_remainder && remainder > 0.0 && k < n && beta_lo < beta_hi) {
        const CostFamily fam = CostFamily::workstation(beta_lo, beta_hi);
        rates[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
            fam.rate_for_spend(remainder);
    }
    return rates;
}

double effective_objective(const Digraph& g, const std::vector<double>& node_rates,
                           double delta, double tol) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("effective_objective: delta must be positive and finite");
    }
    const std::vector<double> deltas(static_cast<std::size_t>(g.node_count()), delta);
    const SpreadingParams params = SpreadingParams::node_rates(g, node_rates, deltas);
    return stability_margin(params, tol);
}

double efficiency(const Digraph& g, const std::vector<double>& node_rates, double beta_hi,
                  double delta, double optimum_epsilon) {
    const std::vector<double> unprotected(static_cast<std::size_t>(g.node_count()), beta_hi);
    const double baseline = effective_objective(g, unprotected, delta);
    const double denom = optimum_epsilon - baseline;
    if (!(denom > 1e-12 * std::max(1.0, std::abs(optimum_epsilon)))) {
        throw std::domain_error(
            "efficiency: undefined because the optimum does not beat the unprotected "
            "baseline");
    }
    return (effective_objective(g, node_rates, delta) - baseline) / denom;
}

Digraph worst_case_graph(int sources, int cycle_length) {
    if (sources < 1) {
        throw std::invalid_argument("worst_case_graph: need at least one source node");
    }
    if (cycle_length <= sources + 2) {
        throw std::invalid_argument(
            "worst_case_graph: cycle length must exceed the source count plus 2");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(cycle_length + sources * cycle_length));
    for (int k = 0; k < cycle_length; ++k) {
        edges.push_back({sources + k, sources + (k + 1) % cycle_length, 1.0});
    }
    for (int s = 0; s < sources; ++s) {
        for (int k = 0; k < cycle_length; ++k) {
            edges.push_back({s, sources + k, 1.0});
        }
    }
    return Digraph(sources + cycle_length, std::move(edges));
}

EfficiencyReport compare_strategies(const Digraph& g,
                                    const std::vector<GreedyStrategy>& strategies,
                                    double beta_lo, double beta_hi, double delta,
                                    double budget) {
    const int n = g.node_count();

    AllocationProblem problem{g};
    problem.parameterization = Parameterization::NodeLevel;
    problem.beta_bounds = uniform_bounds(n, beta_lo, beta_hi);
    problem.delta_bounds = frozen_bounds(n, delta);
    problem.cap = std::max(1.0, 2.0 * delta);
    problem.prevention = CostFamilyKind::Workstation;
    problem.budget = budget;

    EfficiencyReport report;
    report.optimum = solve(problem);
    const CertificationReport cert = certify(report.optimum, problem);
    if (!cert.certified) {
        throw CertificationError("compare_strategies: optimizer result failed its "
                                 "certificate: " + cert.detail);
    }
    report.optimum_epsilon = report.optimum.epsilon_star;

    const std::vector<double> unprotected(static_cast<std::size_t>(n), beta_hi);
    report.baseline_epsilon = effective_objective(g, unprotected, delta);

    const CostFamily fam = CostFamily::workstation(beta_lo, beta_hi);
    for (const GreedyStrategy& s : strategies) {
        StrategyOutcome out;
        out.strategy = s;
        out.name = centrality_name(s.centrality);
        out.rates = greedy_allocate(g, s, beta_lo, beta_hi);
        out.spends.reserve(out.rates.size());
        for (double r : out.rates) {
            if (r < beta_hi) ++out.protected_count;
            out.spends.push_back(fam.cost(r));
            out.total_spend += out.spends.back();
        }
        out.epsilon = effective_objective(g, out.rates, delta);
        out.efficiency =
            efficiency(g, out.rates, beta_hi, delta, report.optimum_epsilon);
        report.strategies.push_back(std::move(out));
    }
    return report;
}

EfficiencyReport workstation_experiment(const WorkstationConfig& config) {
    Digraph g = worst_case_graph(config.sources, config.cycle_length);
    if (config.reversed) g = reversed(g);

    const std::vector<Centrality> measures =
        config.reversed
            ? std::vector<Centrality>{Centrality::InDegree, Centrality::TotalDegree,
                                      Centrality::PageRankReverse,
                                      Centrality::PageRankSymmetrized}
            : std::vector<Centrality>{Centrality::OutDegree, Centrality::TotalDegree,
                                      Centrality::PageRankForward,
                                      Centrality::PageRankSymmetrized};
    std::vector<GreedyStrategy> strategies;
    for (Centrality c : measures) {
        strategies.push_back(GreedyStrategy{c, config.alpha, -1, config.budget, false});
    }
    return compare_strategies(g, strategies, config.beta_lo, config.beta_hi, config.delta,
                              config.budget);
}

}  // namespace netshield
