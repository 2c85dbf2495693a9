#pragma once

#include <string>
#include <utility>
#include <vector>

#include "netshield/costs.hpp"
#include "netshield/dynamics.hpp"
#include "netshield/gp.hpp"
#include "netshield/graph.hpp"

namespace netshield {

/// How protection acts on transmission: one rate per edge, or one scale
/// factor per node with beta_ij = beta_i * a_ij on every in-edge of node i.
enum class Parameterization { EdgeLevel, NodeLevel };

/// Closed interval for one decision element.  lo == hi freezes the element:
/// it becomes a constant, carries no cost term and no spend.
struct ElementBounds {
    double lo = 0.0;
    double hi = 0.0;
};

std::vector<ElementBounds> uniform_bounds(int count, double lo, double hi);
std::vector<ElementBounds> frozen_bounds(int count, double value);

/// Budget-constrained protection design on a digraph.
///
/// Decision variables: transmission rates beta (per edge or per node,
/// bounded by beta_bounds) and recovery rates delta (per node, bounded by
/// delta_bounds).  The optimizer maximizes the decay rate
/// epsilon = -Re lambda_1(B - D) subject to
///   sum of prevention spend + correction spend <= budget.
/// Correction costs are expressed in the complementary rate
/// delta_hat = cap - delta, which must stay positive: cap > delta hi
/// everywhere.  Cost family kinds are global; bounds are per element.
struct AllocationProblem {
    explicit AllocationProblem(Digraph g) : graph(std::move(g)) {}

    Digraph graph;
    Parameterization parameterization = Parameterization::EdgeLevel;
    std::vector<ElementBounds> beta_bounds;   // per edge, or per node when node-level
    std::vector<ElementBounds> delta_bounds;  // per node
    double cap = 1.0;                         // saturation level for recovery rates
    CostFamilyKind prevention = CostFamilyKind::ReciprocalVaccine;
    CostFamilyKind correction = CostFamilyKind::ReciprocalAntidote;
    std::vector<PosyTerm> prevention_terms;  // used when prevention is CustomPosynomial
    std::vector<PosyTerm> correction_terms;  // used when correction is CustomPosynomial
    double budget = 0.0;
    double tol = 1e-7;  // solver duality-gap target
};

struct SolverStats {
    int barrier_rounds = 0;
    int newton_steps = 0;
    double gap_estimate = 0.0;          // constraints / barrier parameter at exit
    double max_constraint_value = 0.0;  // largest transformed constraint value (< 0)
    bool closed_form = false;           // true when no optimization was needed
};

struct AllocationResult {
    std::vector<double> beta_star;         // per edge or per node, like the bounds
    std::vector<double> delta_star;        // per node
    double lambda_hat_star = 0.0;          // optimal spectral bound, = cap - epsilon_star
    double epsilon_star = 0.0;             // certified decay rate
    std::vector<double> perron_u;          // positive certificate vector (u_0 = 1 from
                                           // the solver; max-norm 1 in closed form)
    std::vector<double> prevention_spend;  // aligned with beta_star
    std::vector<double> correction_spend;  // per node
    double total_spend = 0.0;
    SolverStats stats;
};

struct CertificationReport {
    double recomputed_lambda1 = 0.0;  // independent lambda_1(B* - D*)
    double eigenvalue_gap = 0.0;      // |recomputed_lambda1 + epsilon_star|
    double min_certificate_slack = 0.0;  // min_i (lh*u_i - (B*u)_i - dh_i*u_i) / (lh*||u||)
    double budget_residual = 0.0;        // budget - total spend
    bool budget_binding = false;         // residual within tolerance of zero
    bool saturated = false;  // every free element sits at its most protective bound
    double max_bound_violation = 0.0;
    bool certified = false;
    std::string detail;  // human-readable failure reason, empty when certified
};

/// Emits the spectral-bound GP in standard form:
///   minimize lambda_hat subject to, for every node i,
///     sum_j B_ij u_j + delta_hat_i u_i <= lambda_hat u_i,
///   total cost <= budget (constant cost offsets folded into the right side),
///   and two monomial box constraints per free element.
/// Variables are [lambda_hat | free betas | free delta_hats | all u_i].
GpForm build_gp(const AllocationProblem& problem);

/// Solves the allocation problem: builds the GP, transforms it, runs a
/// primal interior-point barrier method from a strictly feasible start, and
/// extracts rates, spend and the Perron certificate.  A budget that exactly
/// matches the cheapest point's cost (e.g. zero for normalized families)
/// short-circuits to the closed-form baseline.  Throws InfeasibleError when
/// the budget cannot even buy the cheapest configuration, ConvergenceError
/// when Newton iterations fail to make progress.
AllocationResult solve(const AllocationProblem& problem);

/// Independent post-check of a solve: recomputes lambda_1(B* - D*) through
/// the spectral module, verifies the componentwise Perron certificate
/// B*u + delta_hat*u <= lambda_hat*u, the budget, and the bounds.
/// Never throws on a bad result; it reports instead.
CertificationReport certify(const AllocationResult& result, const AllocationProblem& problem,
                            double cert_tol = 1e-6);

}  // namespace netshield
