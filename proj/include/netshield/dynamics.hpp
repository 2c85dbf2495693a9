#pragma once

#include <cstdint>
#include <vector>

#include "netshield/graph.hpp"
#include "netshield/matrix.hpp"

namespace netshield {

/// Heterogeneous networked SIS spreading parameters: one transmission rate per
/// edge of a digraph plus one recovery rate per node.  The transmission matrix
/// B has B(i,j) = rate of the edge j -> i, matching the adjacency convention,
/// and D = diag(delta).  The disease-free equilibrium is exponentially stable
/// exactly when the dominant eigenvalue of B - D has negative real part.
class SpreadingParams {
public:
    /// One transmission rate per edge, aligned with the graph's edge ids.
    /// The edge weight is ignored here: the rate IS the matrix entry.
    static SpreadingParams edge_rates(const Digraph& graph, std::vector<double> beta_per_edge,
                                      std::vector<double> delta);

    /// Node-scaled transmission: every in-edge of node i carries rate
    /// beta_per_node[i] * a_ij, i.e. B = diag(beta) * A.
    static SpreadingParams node_rates(const Digraph& graph,
                                      const std::vector<double>& beta_per_node,
                                      std::vector<double> delta);

    const Digraph& graph() const { return graph_; }
    int node_count() const { return graph_.node_count(); }
    /// Per-edge transmission rates, aligned with graph().edges().
    const std::vector<double>& beta() const { return beta_; }
    const std::vector<double>& delta() const { return delta_; }
    /// The transmission matrix B (row i = rates into node i).
    const SparseMatrix& transmission_matrix() const { return b_; }

private:
    SpreadingParams(Digraph graph, std::vector<double> beta, std::vector<double> delta);

    Digraph graph_;
    std::vector<double> beta_;
    std::vector<double> delta_;
    SparseMatrix b_;
};

/// Exponential decay rate of the disease-free equilibrium:
/// epsilon = -Re lambda_1(B - D).  Positive iff the equilibrium is stable.
double stability_margin(const SpreadingParams& params, double tol = 1e-10);

enum class TrajectoryKind { MeanField, Stochastic };

struct StochasticEvent {
    double time;
    int node;
    int new_state;  // 1 = infected, 0 = recovered
};

/// A simulated path.  values has one row per entry of times; row 0 is the
/// initial state.  Mean-field rows hold probabilities in [0,1]; stochastic
/// rows hold binary indicators, and events lists the state flips one per
/// row past the first.
struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::MeanField;
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    std::vector<StochasticEvent> events;  // stochastic runs only
};

/// Step size used by the integrators when the caller passes step <= 0:
/// 0.01 / max(max delta_i, max row sum of B).
double default_step(const SpreadingParams& params);

/// Fixed-step classical Runge-Kutta integration of
///   dp_i/dt = (1 - p_i) sum_j B_ij p_j - delta_i p_i.
/// Values are clamped back into [0,1] when they stray by at most 1e-6;
/// larger excursions indicate a step that is too coarse and raise
/// std::invalid_argument.  The final step is shortened so the trajectory
/// lands exactly on t_end.  step <= 0 selects the default step.
Trajectory meanfield_simulate(const SpreadingParams& params, const std::vector<double>& p0,
                              double t_end, double step = 0.0);

/// Exact event-driven (first-reaction) simulation of the continuous-time
/// Markov process: susceptible i becomes infected at rate
/// sum over infected in-neighbors j of B_ij, infected i recovers at rate
/// delta_i.  Runs until t_end or until the absorbing all-susceptible state.
/// Deterministic for a fixed seed (ties broken by node index).
Trajectory stochastic_simulate(const SpreadingParams& params, const std::vector<int>& x0,
                               double t_end, std::uint64_t seed);

struct ExtinctionStats {
    int trials = 0;
    int extinct = 0;
    double fraction = 0.0;
};

/// Monte-Carlo estimate of the probability that the process started from x0
/// is extinct (all susceptible) by t_end.  Each trial uses a seed derived
/// from (seed, trial index), so results do not depend on execution order.
ExtinctionStats extinction_fraction(const SpreadingParams& params, const std::vector<int>& x0,
                                    double t_end, int trials, std::uint64_t seed);

/// Least-squares exponential decay rate of ||p(t)||_2 over the second half
/// of a trajectory: fits log||p(t)|| = a - rate * t on t in [T/2, T] and
/// returns the rate.  Rows whose norm underflows to zero end the fit window;
/// if fewer than two usable rows remain the decay is treated as instant and
/// +infinity is returned.
double fit_decay_rate(const Trajectory& trajectory);

/// Generalized Susceptible-Exposed-Infected-Vigilant model.  Per-node rates:
/// beta_e, beta_i scale the weighted in-neighbor exposure/infection pressure,
/// epsilon is the E -> I latency rate, delta the I -> V recovery rate, theta
/// the S -> V vigilance rate and gamma the V -> S relaxation rate.
/// beta_e, beta_i and theta may be zero; the remaining rates must be positive.
class GseivParams {
public:
    GseivParams(const Digraph& graph, std::vector<double> beta_e, std::vector<double> beta_i,
                std::vector<double> epsilon, std::vector<double> delta, std::vector<double> theta,
                std::vector<double> gamma);

    const Digraph& graph() const { return graph_; }
    int node_count() const { return graph_.node_count(); }
    const std::vector<double>& beta_e() const { return beta_e_; }
    const std::vector<double>& beta_i() const { return beta_i_; }
    const std::vector<double>& epsilon() const { return epsilon_; }
    const std::vector<double>& delta() const { return delta_; }
    const std::vector<double>& theta() const { return theta_; }
    const std::vector<double>& gamma() const { return gamma_; }

private:
    Digraph graph_;
    std::vector<double> beta_e_;
    std::vector<double> beta_i_;
    std::vector<double> epsilon_;
    std::vector<double> delta_;
    std::vector<double> theta_;
    std::vector<double> gamma_;
};

/// RK4 integration of the four coupled compartment equations.  state0 packs
/// the compartments in blocks [S | E | I | V], each of length n, and every
/// per-node sum S_i + E_i + I_i + V_i must equal 1 (within 1e-9) or the call
/// is rejected.  The right-hand sides sum to zero per node, so the sums are
/// conserved along the trajectory.  step <= 0 selects a default analogous to
/// default_step.
Trajectory gseiv_meanfield(const GseivParams& params, const std::vector<double>& state0,
                           double t_end, double step = 0.0);

struct GseivStability {
    bool stable = false;
    double abscissa = 0.0;  // max Re eigenvalue of the stability matrix
};

/// The 2n x 2n stability matrix
///   Q = [ T B^E A - E   T B^I A ]
///       [      E           -D  ]
/// with T = diag(gamma / (theta + gamma)).  The disease-free equilibrium is
/// globally exponentially stable iff Q is Hurwitz.
SparseMatrix gseiv_stability_matrix(const GseivParams& params);

/// Tests whether the stability matrix is Hurwitz.  Uses a dense eigensolver
/// for n <= 200 nodes and a shifted nonnegative power iteration (valid
/// because Q is Metzler) beyond that.  stable = (abscissa < -tol).
GseivStability gseiv_is_stable(const GseivParams& params, double tol = 1e-9);

}  // namespace netshield
