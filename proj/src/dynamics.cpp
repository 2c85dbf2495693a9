#include "netshield/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include "netshield/rng.hpp"
#include "netshield/spectral.hpp"

namespace netshield {

namespace {

void check_rate_array(const std::vector<double>& v, std::size_t want, bool allow_zero,
                      const char* what) {
    if (v.size() != want) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " rates, got " + std::to_string(v.size()));
    }
    for (double r : v) {
        if (!std::isfinite(r) || (allow_zero ? r < 0.0 : !(r > 0.0))) {
            throw std::invalid_argument(std::string(what) +
                                        (allow_zero ? ": rates must be finite and >= 0"
                                                    : ": rates must be finite and > 0"));
        }
    }
}

// Fixed-step classical Runge-Kutta; the last step is shortened so the final
// row lands exactly on t_end.  post() runs after every accepted step.
template <typename Rhs, typename Post>
void integrate_rk4(std::vector<double> y, double t_end, double step, Rhs&& rhs, Post&& post,
                   Trajectory* out) {
    const std::size_t dim = y.size();
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
    out->times.push_back(0.0);
    out->values.push_back(y);
    double t = 0.0;
    while (t < t_end) {
        const double remaining = t_end - t;
        const bool last = remaining <= step * (1.0 + 1e-9);
        const double h = last ? remaining : step;
        rhs(y, k1);
        for (std::size_t d = 0; d < dim; ++d) stage[d] = y[d] + 0.5 * h * k1[d];
        rhs(stage, k2);
        for (std::size_t d = 0; d < dim; ++d) stage[d] = y[d] + 0.5 * h * k2[d];
        rhs(stage, k3);
        for (std::size_t d = 0; d < dim; ++d) stage[d] = y[d] + h * k3[d];
        rhs(stage, k4);
        for (std::size_t d = 0; d < dim; ++d) {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        post(y);
        t = last ? t_end : t + step;
        out->times.push_back(t);
        out->values.push_back(y);
    }
}

void check_horizon_and_step(double t_end, double step) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("simulate: t_end must be positive and finite");
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw std::invalid_argument("simulate: step must be positive and finite");
    }
}

}  // namespace

SpreadingParams::SpreadingParams(Digraph graph, std::vector<double> beta,
                                 std::vector<double> delta)
    : graph_(std::move(graph)),
      beta_(std::move(beta)),
      delta_(std::move(delta)),
      b_(graph_.node_count()) {
    for (int e = 0; e < graph_.edge_count(); ++e) {
        const Edge& edge = graph_.edge(e);
        b_.add(edge.dst, edge.src, beta_[static_cast<std::size_t>(e)]);
    }
}

SpreadingParams SpreadingParams::edge_rates(const Digraph& graph,
                                            std::vector<double> beta_per_edge,
                                            std::vector<double> delta) {
    check_rate_array(beta_per_edge, static_cast<std::size_t>(graph.edge_count()), false,
                     "edge_rates: beta");
    check_rate_array(delta, static_cast<std::size_t>(graph.node_count()), false,
                     "edge_rates: delta");
    return SpreadingParams(graph, std::move(beta_per_edge), std::move(delta));
}

SpreadingParams SpreadingParams::node_rates(const Digraph& graph,
                                            const std::vector<double>& beta_per_node,
                                            std::vector<double> delta) {
    check_rate_array(beta_per_node, static_cast<std::size_t>(graph.node_count()), false,
                     "node_rates: beta");
    check_rate_array(delta, static_cast<std::size_t>(graph.node_count()), false,
                     "node_rates: delta");
    std::vector<double> per_edge(static_cast<std::size_t>(graph.edge_count()));
    for (int e = 0; e < graph.edge_count(); ++e) {
        const Edge& edge = graph.edge(e);
        per_edge[static_cast<std::size_t>(e)] =
            beta_per_node[static_cast<std::size_t>(edge.dst)] * edge.weight;
    }
    return SpreadingParams(graph, std::move(per_edge), std::move(delta));
}

double stability_margin(const SpreadingParams& params, double tol) {
    return -dominant_metzler_eigenvalue(params.transmission_matrix(), params.delta(), tol).value;
}

double default_step(const SpreadingParams& params) {
    const double fastest = std::max(*std::max_element(params.delta().begin(), params.delta().end()),
                                    params.transmission_matrix().max_row_sum());
    return 0.01 / fastest;
}

Trajectory meanfield_simulate(const SpreadingParams& params, const std::vector<double>& p0,
                              double t_end, double step) {
    const int n = params.node_count();
    if (p0.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("meanfield_simulate: p0 must have one entry per node");
    }
    for (double p : p0) {
        if (!(p >= 0.0) || !(p <= 1.0)) {
            throw std::invalid_argument("meanfield_simulate: p0 entries must lie in [0,1]");
        }
    }
    if (step <= 0.0) step = default_step(params);
    check_horizon_and_step(t_end, step);

    const SparseMatrix& b = params.transmission_matrix();
    const std::vector<double>& delta = params.delta();
    std::vector<double> load(static_cast<std::size_t>(n));
    auto rhs = [&](const std::vector<double>& p, std::vector<double>& dp) {
        b.multiply(p, load);
        for (int i = 0; i < n; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            dp[u] = (1.0 - p[u]) * load[u] - delta[u] * p[u];
        }
    };
    auto clamp = [&](std::vector<double>& p) {
        for (double& v : p) {
            if (v < 0.0) {
                if (v < -1e-6) {
                    throw std::invalid_argument(
                        "meanfield_simulate: state left [0,1] by more than 1e-6; "
                        "use a smaller step");
                }
                v = 0.0;
            } else if (v > 1.0) {
                if (v > 1.0 + 1e-6) {
                    throw std::invalid_argument(
                        "meanfield_simulate: state left [0,1] by more than 1e-6; "
                        "use a smaller step");
                }
                v = 1.0;
            }
        }
    };

    Trajectory tr;
    tr.kind = TrajectoryKind::MeanField;
    integrate_rk4(p0, t_end, step, rhs, clamp, &tr);
    return tr;
}

Trajectory stochastic_simulate(const SpreadingParams& params, const std::vector<int>& x0,
                               double t_end, std::uint64_t seed) {
    const int n = params.node_count();
    if (x0.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("stochastic_simulate: x0 must have one entry per node");
    }
    for (int v : x0) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("stochastic_simulate: x0 entries must be 0 or 1");
        }
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("stochastic_simulate: t_end must be positive and finite");
    }

    const Digraph& g = params.graph();
    const std::vector<double>& beta = params.beta();
    const std::vector<double>& delta = params.delta();

    std::vector<char> infected(static_cast<std::size_t>(n));
    int infected_count = 0;
    for (int i = 0; i < n; ++i) {
        infected[static_cast<std::size_t>(i)] = static_cast<char>(x0[static_cast<std::size_t>(i)]);
        infected_count += x0[static_cast<std::size_t>(i)];
    }

    // First-reaction scheme: each node holds at most one live tentative event;
    // stale entries are skipped via version stamps.  Resampling a fresh
    // exponential whenever a node's rate changes is exact by memorylessness.
    struct Pending {
        double time;
        int node;
        std::uint64_t version;
    };
    auto later = [](const Pending& a, const Pending& b) {
        if (a.time != b.time) return a.time > b.time;
        return a.node > b.node;
    };
    std::priority_queue<Pending, std::vector<Pending>, decltype(later)> queue(later);
    std::vector<std::uint64_t> version(static_cast<std::size_t>(n), 0);
    Rng rng(seed);

    auto rate_of = [&](int i) -> double {
        if (infected[static_cast<std::size_t>(i)]) return delta[static_cast<std::size_t>(i)];
        double r = 0.0;
        for (int e : g.in_edges(i)) {
            if (infected[static_cast<std::size_t>(g.edge(e).src)]) {
                r += beta[static_cast<std::size_t>(e)];
            }
        }
        return r;
    };
    auto reschedule = [&](int i, double now) {
        const std::size_t u = static_cast<std::size_t>(i);
        ++version[u];
        const double r = rate_of(i);
        if (r > 0.0) queue.push(Pending{now + rng.exponential(r), i, version[u]});
    };
    for (int i = 0; i < n; ++i) reschedule(i, 0.0);

    Trajectory tr;
    tr.kind = TrajectoryKind::Stochastic;
    tr.times.push_back(0.0);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(i)] = x0[static_cast<std::size_t>(i)];
    tr.values.push_back(row);

    while (!queue.empty() && infected_count > 0) {
        const Pending ev = queue.top();
        queue.pop();
        if (ev.version != version[static_cast<std::size_t>(ev.node)]) continue;
        if (ev.time > t_end) break;
        const std::size_t u = static_cast<std::size_t>(ev.node);
        infected[u] = !infected[u];
        infected_count += infected[u] ? 1 : -1;
        const int new_state = infected[u] ? 1 : 0;
        tr.events.push_back(StochasticEvent{ev.time, ev.node, new_state});
        tr.times.push_back(ev.time);
        row[u] = new_state;
        tr.values.push_back(row);
        reschedule(ev.node, ev.time);
        for (int e : g.out_edges(ev.node)) {
            const int k = g.edge(e).dst;
            if (k != ev.node && !infected[static_cast<std::size_t>(k)]) reschedule(k, ev.time);
        }
    }
    return tr;
}

ExtinctionStats extinction_fraction(const SpreadingParams& params, const std::vector<int>& x0,
                                    double t_end, int trials, std::uint64_t seed) {
    if (trials <= 0) throw std::invalid_argument("extinction_fraction: trials must be positive");
    ExtinctionStats stats;
    stats.trials = trials;
    for (int k = 0; k < trials; ++k) {
        const Trajectory tr =
            stochastic_simulate(params, x0, t_end, derive_seed(seed, static_cast<std::uint64_t>(k)));
        const std::vector<double>& last = tr.values.back();
        bool any = false;
        for (double v : last) any = any || v != 0.0;
        if (!any) ++stats.extinct;
    }
    stats.fraction = static_cast<double>(stats.extinct) / static_cast<double>(trials);
    return stats;
}

double fit_decay_rate(const Trajectory& trajectory) {
    const std::size_t rows = trajectory.times.size();
    if (rows < 2) throw std::invalid_argument("fit_decay_rate: trajectory too short");
    const double t_begin = 0.5 * trajectory.times.back();
    std::vector<double> ts;
    std::vector<double> logs;
    for (std::size_t r = 0; r < rows; ++r) {
        if (trajectory.times[r] < t_begin) continue;
        double sq = 0.0;
        for (double v : trajectory.values[r]) sq += v * v;
        if (sq <= 0.0) break;  // underflowed to the equilibrium exactly
        ts.push_back(trajectory.times[r]);
        logs.push_back(0.5 * std::log(sq));
    }
    if (ts.size() < 2) return std::numeric_limits<double>::infinity();
    double mt = 0.0, my = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        mt += ts[k];
        my += logs[k];
    }
    mt /= static_cast<double>(ts.size());
    my /= static_cast<double>(ts.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        num += (ts[k] - mt) * (logs[k] - my);
        den += (ts[k] - mt) * (ts[k] - mt);
    }
    return -num / den;
}

GseivParams::GseivParams(const Digraph& graph, std::vector<double> beta_e,
                         std::vector<double> beta_i, std::vector<double> epsilon,
                         std::vector<double> delta, std::vector<double> theta,
                         std::vector<double> gamma)
    : graph_(graph),
      beta_e_(std::move(beta_e)),
      beta_i_(std::move(beta_i)),
      epsilon_(std::move(epsilon)),
      delta_(std::move(delta)),
      theta_(std::move(theta)),
      gamma_(std::move(gamma)) {
    const std::size_t n = static_cast<std::size_t>(graph_.node_count());
    check_rate_array(beta_e_, n, true, "gseiv: beta_e");
    check_rate_array(beta_i_, n, true, "gseiv: beta_i");
    check_rate_array(epsilon_, n, false, "gseiv: epsilon");
    check_rate_array(delta_, n, false, "gseiv: delta");
    check_rate_array(theta_, n, true, "gseiv: theta");
    check_rate_array(gamma_, n, false, "gseiv: gamma");
}

Trajectory gseiv_meanfield(const GseivParams& params, const std::vector<double>& state0,
                           double t_end, double step) {
    const int n = params.node_count();
    const std::size_t un = static_cast<std::size_t>(n);
    if (state0.size() != 4 * un) {
        throw std::invalid_argument("gseiv_meanfield: state0 must pack [S|E|I|V], 4n entries");
    }
    for (double v : state0) {
        if (!(v >= 0.0) || !(v <= 1.0)) {
            throw std::invalid_argument("gseiv_meanfield: state entries must lie in [0,1]");
        }
    }
    for (std::size_t i = 0; i < un; ++i) {
        const double sum = state0[i] + state0[un + i] + state0[2 * un + i] + state0[3 * un + i];
        if (std::abs(sum - 1.0) > 1e-9) {
            throw std::invalid_argument(
                "gseiv_meanfield: per-node compartments must sum to 1 in state0");
        }
    }

    const SparseMatrix a = params.graph().adjacency_matrix();
    if (step <= 0.0) {
        double fastest = 0.0;
        const WeightedDegrees deg = params.graph().weighted_degrees();
        for (std::size_t i = 0; i < un; ++i) {
            fastest = std::max({fastest, params.epsilon()[i], params.delta()[i],
                                params.gamma()[i], params.theta()[i],
                                (params.beta_e()[i] + params.beta_i()[i]) * deg.in[i]});
        }
        step = 0.01 / fastest;
    }
    check_horizon_and_step(t_end, step);

    std::vector<double> block(un), load_e(un), load_i(un);
    auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(un),
                  y.begin() + static_cast<std::ptrdiff_t>(2 * un), block.begin());
        a.multiply(block, load_e);
        std::copy(y.begin() + static_cast<std::ptrdiff_t>(2 * un),
                  y.begin() + static_cast<std::ptrdiff_t>(3 * un), block.begin());
        a.multiply(block, load_i);
        for (std::size_t i = 0; i < un; ++i) {
            const double s = y[i];
            const double e = y[un + i];
            const double inf = y[2 * un + i];
            const double v = y[3 * un + i];
            const double pressure =
                s * (params.beta_e()[i] * load_e[i] + params.beta_i()[i] * load_i[i]);
            dy[i] = params.gamma()[i] * v - params.theta()[i] * s - pressure;
            dy[un + i] = pressure - params.epsilon()[i] * e;
            dy[2 * un + i] = params.epsilon()[i] * e - params.delta()[i] * inf;
            dy[3 * un + i] = params.delta()[i] * inf + params.theta()[i] * s - params.gamma()[i] * v;
        }
    };

    Trajectory tr;
    tr.kind = TrajectoryKind::MeanField;
    integrate_rk4(state0, t_end, step, rhs, [](std::vector<double>&) {}, &tr);
    return tr;
}

SparseMatrix gseiv_stability_matrix(const GseivParams& params) {
    const int n = params.node_count();
    SparseMatrix q(2 * n);
    for (const Edge& edge : params.graph().edges()) {
        const std::size_t i = static_cast<std::size_t>(edge.dst);
        const double t = params.gamma()[i] / (params.theta()[i] + params.gamma()[i]);
        q.add(edge.dst, edge.src, t * params.beta_e()[i] * edge.weight);
        q.add(edge.dst, n + edge.src, t * params.beta_i()[i] * edge.weight);
    }
    for (int i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        q.add(i, i, -params.epsilon()[u]);
        q.add(n + i, i, params.epsilon()[u]);
        q.add(n + i, n + i, -params.delta()[u]);
    }
    return q;
}

GseivStability gseiv_is_stable(const GseivParams& params, double tol) {
    const int n = params.node_count();
    const SparseMatrix q = gseiv_stability_matrix(params);
    double abscissa;
    if (n <= 200) {
        const int dim = 2 * n;
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (const SparseMatrix::Entry& entry : q.row(r)) dense(r, entry.col) += entry.value;
        }
        const Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
        abscissa = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < dim; ++k) abscissa = std::max(abscissa, solver.eigenvalues()[k].real());
    } else {
        // Q is Metzler, so its spectral abscissa is the Perron root of the
        // shifted nonnegative matrix Q + sI minus s.
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::size_t u = static_cast<std::size_t>(i);
            s = std::max({s, params.epsilon()[u], params.delta()[u]});
        }
        SparseMatrix shifted = q;
        for (int r = 0; r < 2 * n; ++r) shifted.add(r, r, s);
        abscissa = spectral_radius(shifted).value - s;
    }
    return GseivStability{abscissa < -tol, abscissa};
}

}  // namespace netshield
