#pragma once

#include <string>
#include <vector>

#include "netshield/allocate.hpp"
#include "netshield/graph.hpp"

namespace netshield {

/// Node-ranking measures available to the greedy protector.
enum class Centrality {
    OutDegree,
    InDegree,
    TotalDegree,
    PageRankForward,      // walks up the edges: potent-spreader score
    PageRankReverse,      // walks along the edges: exposure score
    PageRankSymmetrized,  // ignores edge direction
};

/// Stable display / CSV name, e.g. "pagerank-forward".
std::string centrality_name(Centrality c);

/// Inverse of centrality_name; throws std::invalid_argument for unknown
/// names.
Centrality centrality_from_name(const std::string& name);

/// Raw per-node scores of one measure; alpha feeds the PageRank variants
/// and is ignored by the degree measures.
std::vector<double> centrality_scores(const Digraph& g, Centrality c, double alpha = 0.1);

/* Greedy protection: fully protect the k nodes with the highest centrality
 * ranking (beta_lo), leave the rest unprotected (beta_hi).  Ties break by
 * ascending node index.
 *
 * k can be given directly, or derived from a budget under the normalized
 * cost convention where fully protecting one node costs exactly 1:
 * k = floor(budget).  The remainder is discarded unless spend_remainder is
 * set, in which case it buys partial protection for the next-ranked node
 * along the workstation cost curve.
 */
struct GreedyStrategy {
    Centrality centrality = Centrality::OutDegree;
    double alpha = 0.1;   // PageRank damping, unused by degree measures
    int k = -1;           // number of fully protected nodes; negative = use budget
    double budget = 0.0;  // consulted only when k < 0
    bool spend_remainder = false;
};

/// Per-node transmission rates chosen by the strategy.
std::vector<double> greedy_allocate(const Digraph& g, const GreedyStrategy& strategy,
                                    double beta_lo, double beta_hi);

/// Decay margin of the node-scaled network:
///   epsilon(beta) = -Re lambda_1(diag(beta) A - delta I).
double effective_objective(const Digraph& g, const std::vector<double>& node_rates,
                           double delta, double tol = 1e-12);

/// Normalized quality of an allocation against the certified optimum:
///   Q = (epsilon(beta) - epsilon(beta_hi 1)) / (optimum - epsilon(beta_hi 1)),
/// which is 0 at "no protection" and 1 at the optimum.  Throws
/// std::domain_error when the optimum does not beat the unprotected
/// baseline (the ratio is undefined).
double efficiency(const Digraph& g, const std::vector<double>& node_rates, double beta_hi,
                  double delta, double optimum_epsilon);

/* The adversarial instance for degree- and PageRank-guided protection:
 * `sources` nodes with no in-edges, each feeding every node of a directed
 * cycle of length `cycle_length`, all weights 1.  Sources out-rank every
 * cycle node on out-degree and spreader PageRank, yet protecting them
 * leaves the cycle - the only part carrying the spectral radius - intact.
 * Requires cycle_length > sources + 2.
 */
Digraph worst_case_graph(int sources, int cycle_length);

/* The workstation-protection experiment: rank-and-protect strategies versus
 * the optimizer on the adversarial graph.  Budget 3 fully protects three
 * nodes; every greedy measure picks the three sources (or, with reversed
 * set, the mirrored trap), so each greedy margin stays at the unprotected
 * -0.2 while the optimizer achieves a positive margin.
 */
struct WorkstationConfig {
    int sources = 3;
    int cycle_length = 6;
    double beta_lo = 0.01;
    double beta_hi = 0.5;
    double delta = 0.3;
    double budget = 3.0;
    double alpha = 0.1;
    bool reversed = false;  // flip every edge and rank by the mirrored measures
};

struct StrategyOutcome {
    GreedyStrategy strategy;
    std::string name;            // centrality_name of the measure
    std::vector<double> rates;   // per-node transmission rates
    std::vector<double> spends;  // per-node spend on the normalized curve
    int protected_count = 0;
    double total_spend = 0.0;
    double epsilon = 0.0;
    double efficiency = 0.0;
};

struct EfficiencyReport {
    std::vector<StrategyOutcome> strategies;
    double baseline_epsilon = 0.0;  // margin with every rate at beta_hi
    double optimum_epsilon = 0.0;   // certified optimizer margin
    AllocationResult optimum;       // full optimizer output on the same problem
};

/// Runs a set of greedy strategies plus the certified optimizer on an
/// arbitrary graph under node-level protection with a common frozen
/// recovery rate; the optimizer prices rates on the workstation curve, the
/// same normalized convention the greedy budget uses.  Throws
/// CertificationError if the optimizer's result fails its independent
/// certificate, std::domain_error if the optimum cannot beat the
/// unprotected baseline (efficiency undefined).
EfficiencyReport compare_strategies(const Digraph& g,
                                    const std::vector<GreedyStrategy>& strategies,
                                    double beta_lo, double beta_hi, double delta,
                                    double budget);

/// Runs the experiment: four greedy measures plus the certified optimum.
/// Throws CertificationError if the optimizer's result fails its own
/// independent certificate.
EfficiencyReport workstation_experiment(const WorkstationConfig& config = {});

}  // namespace netshield
