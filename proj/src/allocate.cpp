#include "netshield/allocate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "netshield/errors.hpp"
#include "netshield/spectral.hpp"

namespace netshield {

std::vector<ElementBounds> uniform_bounds(int count, double lo, double hi) {
    return std::vector<ElementBounds>(static_cast<std::size_t>(count), ElementBounds{lo, hi});
}

std::vector<ElementBounds> frozen_bounds(int count, double value) {
    return uniform_bounds(count, value, value);
}

namespace {

// Variable bookkeeping shared by the builder, the solver and the extractor.
// Variable order: [0] lambda_hat, then one variable per free beta element,
// then one per free delta_hat node, then u_0 .. u_{n-1}.
struct Layout {
    int element_count = 0;  // beta elements: edges (edge-level) or nodes (node-level)
    std::vector<int> beta_var;                        // per element, -1 = frozen
    std::vector<int> delta_var;                       // per node, -1 = frozen
    std::vector<std::optional<CostFamily>> beta_fam;  // engaged iff free
    std::vector<std::optional<CostFamily>> delta_fam;
    int u_offset = 0;
    int var_count = 0;
    double budget_constant = 0.0;  // budget minus the families' constant offsets
    bool any_free = false;
};

bool frozen(const ElementBounds& b) { return b.lo == b.hi; }

void validate_problem(const AllocationProblem& p) {
    const int n = p.graph.node_count();
    const std::size_t want_beta = static_cast<std::size_t>(
        p.parameterization == Parameterization::EdgeLevel ? p.graph.edge_count() : n);
    if (p.beta_bounds.size() != want_beta) {
        throw std::invalid_argument("allocate: beta_bounds must have one interval per " +
                                    std::string(p.parameterization == Parameterization::EdgeLevel
                                                    ? "edge"
                                                    : "node"));
    }
    if (p.delta_bounds.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("allocate: delta_bounds must have one interval per node");
    }
    auto check_interval = [](const ElementBounds& b, const char* what) {
        if (!(b.lo > 0.0) || !(b.lo <= b.hi) || !std::isfinite(b.hi)) {
            throw std::invalid_argument(std::string("allocate: ") + what +
                                        " bounds must satisfy 0 < lo <= hi");
        }
    };
    for (const ElementBounds& b : p.beta_bounds) check_interval(b, "beta");
    for (const ElementBounds& b : p.delta_bounds) {
        check_interval(b, "delta");
        if (!(b.hi < p.cap)) {
            throw std::invalid_argument(
                "allocate: every delta upper bound must stay below the cap");
        }
    }
    if (!(p.cap > 0.0) || !std::isfinite(p.cap)) {
        throw std::invalid_argument("allocate: cap must be positive and finite");
    }
    if (!std::isfinite(p.budget) || p.budget < 0.0) {
        throw std::invalid_argument("allocate: budget must be finite and nonnegative");
    }
    if (!(p.tol > 0.0)) throw std::invalid_argument("allocate: tol must be positive");
    if (p.prevention == CostFamilyKind::ReciprocalAntidote) {
        throw std::invalid_argument("allocate: the antidote family prices recovery, not "
                                    "transmission; pick a prevention family");
    }
    if (p.correction == CostFamilyKind::ReciprocalVaccine ||
        p.correction == CostFamilyKind::Workstation) {
        throw std::invalid_argument("allocate: the vaccine/workstation families price "
                                    "transmission, not recovery; pick a correction family");
    }
}

CostFamily make_prevention(const AllocationProblem& p, const ElementBounds& b) {
    switch (p.prevention) {
        case CostFamilyKind::ReciprocalVaccine:
            return CostFamily::reciprocal_vaccine(b.lo, b.hi);
        case CostFamilyKind::Workstation:
            return CostFamily::workstation(b.lo, b.hi);
        case CostFamilyKind::CustomPosynomial:
            return CostFamily::custom_prevention(p.prevention_terms, b.lo, b.hi);
        default:
            throw std::invalid_argument("allocate: unsupported prevention family");
    }
}

CostFamily make_correction(const AllocationProblem& p, const ElementBounds& b) {
    switch (p.correction) {
        case CostFamilyKind::ReciprocalAntidote:
            return CostFamily::reciprocal_antidote(b.lo, b.hi, p.cap);
        case CostFamilyKind::CustomPosynomial:
            return CostFamily::custom_correction(p.correction_terms, b.lo, b.hi, p.cap);
        default:
            throw std::invalid_argument("allocate: unsupported correction family");
    }
}

Layout build_layout(const AllocationProblem& p) {
    Layout lay;
    const int n = p.graph.node_count();
    lay.element_count = static_cast<int>(p.beta_bounds.size());
    lay.beta_var.assign(static_cast<std::size_t>(lay.element_count), -1);
    lay.delta_var.assign(static_cast<std::size_t>(n), -1);
    lay.beta_fam.resize(static_cast<std::size_t>(lay.element_count));
    lay.delta_fam.resize(static_cast<std::size_t>(n));
    int next = 1;  // 0 is lambda_hat
    for (int e = 0; e < lay.element_count; ++e) {
        const ElementBounds& b = p.beta_bounds[static_cast<std::size_t>(e)];
        if (frozen(b)) continue;
        lay.beta_var[static_cast<std::size_t>(e)] = next++;
        lay.beta_fam[static_cast<std::size_t>(e)] = make_prevention(p, b);
    }
    for (int i = 0; i < n; ++i) {
        const ElementBounds& b = p.delta_bounds[static_cast<std::size_t>(i)];
        if (frozen(b)) continue;
        lay.delta_var[static_cast<std::size_t>(i)] = next++;
        lay.delta_fam[static_cast<std::size_t>(i)] = make_correction(p, b);
    }
    lay.u_offset = next;
    lay.var_count = next + n;
    double offsets = 0.0;
    for (const auto& f : lay.beta_fam) {
        if (f) offsets += f->gp_offset();
    }
    for (const auto& f : lay.delta_fam) {
        if (f) offsets += f->gp_offset();
    }
    lay.budget_constant = p.budget - offsets;
    lay.any_free = next > 1;
    return lay;
}

double baseline_cost(const Layout& lay) {
    double c = 0.0;
    for (const auto& f : lay.beta_fam) {
        if (f) c += f->cost(f->hi());  // cheapest transmission: no reduction
    }
    for (const auto& f : lay.delta_fam) {
        if (f) c += f->cost(f->lo());  // cheapest recovery: no boost
    }
    return c;
}

std::string element_name(const AllocationProblem& p, int e) {
    std::ostringstream os;
    if (p.parameterization == Parameterization::EdgeLevel) {
        const Edge& ed = p.graph.edge(e);
        os << "beta[" << ed.src << "->" << ed.dst << "]";
    } else {
        os << "beta[n" << e << "]";
    }
    return os.str();
}

GpForm build_form(const AllocationProblem& p, const Layout& lay) {
    const int n = p.graph.node_count();
    GpForm gp;
    gp.objective_variable = 0;
    gp.variable_names.resize(static_cast<std::size_t>(lay.var_count));
    gp.variable_names[0] = "lambda_hat";
    for (int e = 0; e < lay.element_count; ++e) {
        const int v = lay.beta_var[static_cast<std::size_t>(e)];
        if (v >= 0) gp.variable_names[static_cast<std::size_t>(v)] = element_name(p, e);
    }
    for (int i = 0; i < n; ++i) {
        const int v = lay.delta_var[static_cast<std::size_t>(i)];
        if (v >= 0) {
            gp.variable_names[static_cast<std::size_t>(v)] =
                "delta_hat[" + std::to_string(i) + "]";
        }
    }
    for (int i = 0; i < n; ++i) {
        gp.variable_names[static_cast<std::size_t>(lay.u_offset + i)] =
            "u[" + std::to_string(i) + "]";
    }

    // Eigenvalue condition per node, divided by its right-hand monomial
    // lambda_hat * u_i.
    for (int i = 0; i < n; ++i) {
        GpConstraint c;
        c.label = "eig[" + std::to_string(i) + "]";
        for (int e : p.graph.in_edges(i)) {
            const Edge& ed = p.graph.edge(e);
            GpTerm t;
            int bvar;
            if (p.parameterization == Parameterization::EdgeLevel) {
                bvar = lay.beta_var[static_cast<std::size_t>(e)];
                t.coef = bvar >= 0 ? 1.0 : p.beta_bounds[static_cast<std::size_t>(e)].lo;
            } else {
                bvar = lay.beta_var[static_cast<std::size_t>(i)];
                t.coef = ed.weight *
                         (bvar >= 0 ? 1.0 : p.beta_bounds[static_cast<std::size_t>(i)].lo);
            }
            if (bvar >= 0) t.powers.push_back({bvar, 1.0});
            t.powers.push_back({lay.u_offset + ed.src, 1.0});
            t.powers.push_back({0, -1.0});
            t.powers.push_back({lay.u_offset + i, -1.0});
            c.lhs.terms.push_back(std::move(t));
        }
        GpTerm d;
        const int dvar = lay.delta_var[static_cast<std::size_t>(i)];
        if (dvar >= 0) {
            d.coef = 1.0;
            d.powers.push_back({dvar, 1.0});
        } else {
            d.coef = p.cap - p.delta_bounds[static_cast<std::size_t>(i)].lo;
        }
        d.powers.push_back({0, -1.0});
        c.lhs.terms.push_back(std::move(d));
        gp.constraints.push_back(std::move(c));
    }

    // Budget posynomial divided by C' = budget - constant offsets.
    if (lay.any_free) {
        if (!(lay.budget_constant > 0.0)) {
            throw InfeasibleError(
                "allocate: budget minus cost-family constants is not positive");
        }
        GpConstraint c;
        c.label = "budget";
        auto add_terms = [&](const CostFamily& f, int var) {
            for (const PosyTerm& t : f.gp_terms()) {
                c.lhs.terms.push_back(
                    GpTerm{t.coef / lay.budget_constant, {{var, t.exponent}}});
            }
        };
        for (int e = 0; e < lay.element_count; ++e) {
            const int v = lay.beta_var[static_cast<std::size_t>(e)];
            if (v >= 0) add_terms(*lay.beta_fam[static_cast<std::size_t>(e)], v);
        }
        for (int i = 0; i < n; ++i) {
            const int v = lay.delta_var[static_cast<std::size_t>(i)];
            if (v >= 0) add_terms(*lay.delta_fam[static_cast<std::size_t>(i)], v);
        }
        gp.constraints.push_back(std::move(c));
    }

    // Two monomial box constraints per free variable.
    auto add_box = [&](int var, double lo, double hi, const std::string& name) {
        GpConstraint up;
        up.label = "box_hi[" + name + "]";
        up.lhs.terms.push_back(GpTerm{1.0 / hi, {{var, 1.0}}});
        gp.constraints.push_back(std::move(up));
        GpConstraint down;
        down.label = "box_lo[" + name + "]";
        down.lhs.terms.push_back(GpTerm{lo, {{var, -1.0}}});
        gp.constraints.push_back(std::move(down));
    };
    for (int e = 0; e < lay.element_count; ++e) {
        const int v = lay.beta_var[static_cast<std::size_t>(e)];
        if (v < 0) continue;
        const ElementBounds& b = p.beta_bounds[static_cast<std::size_t>(e)];
        add_box(v, b.lo, b.hi, element_name(p, e));
    }
    for (int i = 0; i < n; ++i) {
        const int v = lay.delta_var[static_cast<std::size_t>(i)];
        if (v < 0) continue;
        const CostFamily& f = *lay.delta_fam[static_cast<std::size_t>(i)];
        add_box(v, f.var_lo(), f.var_hi(), "delta_hat[" + std::to_string(i) + "]");
    }
    return gp;
}

// Rates implied by a transformed iterate y.
void rates_from_y(const AllocationProblem& p, const Layout& lay, const std::vector<double>& y,
                  std::vector<double>* beta, std::vector<double>* delta) {
    beta->assign(static_cast<std::size_t>(lay.element_count), 0.0);
    for (int e = 0; e < lay.element_count; ++e) {
        const ElementBounds& b = p.beta_bounds[static_cast<std::size_t>(e)];
        const int v = lay.beta_var[static_cast<std::size_t>(e)];
        (*beta)[static_cast<std::size_t>(e)] =
            v < 0 ? b.lo : std::clamp(std::exp(y[static_cast<std::size_t>(v)]), b.lo, b.hi);
    }
    const int n = p.graph.node_count();
    delta->assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const ElementBounds& b = p.delta_bounds[static_cast<std::size_t>(i)];
        const int v = lay.delta_var[static_cast<std::size_t>(i)];
        (*delta)[static_cast<std::size_t>(i)] =
            v < 0 ? b.lo
                  : std::clamp(p.cap - std::exp(y[static_cast<std::size_t>(v)]), b.lo, b.hi);
    }
}

SpreadingParams params_from_rates(const AllocationProblem& p, const std::vector<double>& beta,
                                  const std::vector<double>& delta) {
    return p.parameterization == Parameterization::EdgeLevel
               ? SpreadingParams::edge_rates(p.graph, beta, delta)
               : SpreadingParams::node_rates(p.graph, beta, delta);
}

// Strictly feasible start: rates interpolated toward the cheapest end in log
// space (tau = 0 is exactly cheapest), u from the Perron vector of the
// implied nonnegative matrix B + diag(delta_hat) (all-ones fallback), and
// lambda_hat a hair above the certified Collatz-Wielandt bound of that u.
std::vector<double> initial_point(const AllocationProblem& p, const Layout& lay, double tau,
                                  double tau_delta) {
    std::vector<double> y(static_cast<std::size_t>(lay.var_count), 0.0);
    for (int e = 0; e < lay.element_count; ++e) {
        const int v = lay.beta_var[static_cast<std::size_t>(e)];
        if (v < 0) continue;
        const CostFamily& f = *lay.beta_fam[static_cast<std::size_t>(e)];
        y[static_cast<std::size_t>(v)] =
            (1.0 - tau) * std::log(f.var_hi()) + tau * std::log(f.var_lo());
    }
    const int n = p.graph.node_count();
    for (int i = 0; i < n; ++i) {
        const int v = lay.delta_var[static_cast<std::size_t>(i)];
        if (v < 0) continue;
        const CostFamily& f = *lay.delta_fam[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(v)] =
            (1.0 - tau_delta) * std::log(f.var_hi()) + tau_delta * std::log(f.var_lo());
    }

    std::vector<double> beta, delta;
    rates_from_y(p, lay, y, &beta, &delta);
    SparseMatrix m = params_from_rates(p, beta, delta).transmission_matrix();
    for (int i = 0; i < n; ++i) m.add(i, i, p.cap - delta[static_cast<std::size_t>(i)]);

    std::vector<double> u(static_cast<std::size_t>(n), 1.0);
    try {
        const SpectralResult perron = spectral_radius(m, 1e-8, 20000);
        u = perron.vector;
    } catch (const ConvergenceError&) {
        // All-ones still yields a finite Collatz-Wielandt bound below.
    }
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, v);
    for (double& v : u) v = std::max(v, 1e-3 * umax);
    for (int i = n - 1; i >= 0; --i) u[static_cast<std::size_t>(i)] /= u[0];

    std::vector<double> mu(static_cast<std::size_t>(n));
    m.multiply(u, mu);
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        bound = std::max(bound, mu[static_cast<std::size_t>(i)] / u[static_cast<std::size_t>(i)]);
    }
    y[0] = std::log(1.01 * bound);
    for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(lay.u_offset + i)] = std::log(u[static_cast<std::size_t>(i)]);
    }
    return y;
}

bool strictly_feasible(const ConvexForm& cf, const std::vector<double>& y) {
    for (int k = 0; k < cf.constraint_count(); ++k) {
        if (!(cf.value(k, y) < -1e-10)) return false;
    }
    return true;
}

struct BarrierOutcome {
    std::vector<double> y;
    SolverStats stats;
};

// Primal interior point on the transformed program: minimize y_obj subject
// to every log-sum-exp constraint < 0, via Newton steps on
//   phi_t(y) = t * y_obj - sum_k log(-f_k(y))
// with a backtracking Armijo line search, barrier parameter t growing by 10
// until constraint_count / t < tol.
BarrierOutcome barrier_solve(const ConvexForm& cf, std::vector<double> y,
                             const std::vector<char>& fixed, double tol) {
    const int m = cf.constraint_count();
    std::vector<int> act;
    for (int v = 0; v < cf.variable_count(); ++v) {
        if (!fixed[static_cast<std::size_t>(v)]) act.push_back(v);
    }
    const int na = static_cast<int>(act.size());
    std::vector<int> pos(static_cast<std::size_t>(cf.variable_count()), -1);
    for (int a = 0; a < na; ++a) pos[static_cast<std::size_t>(act[static_cast<std::size_t>(a)])] = a;
    const int obj_pos = pos[static_cast<std::size_t>(cf.objective_variable())];
    if (obj_pos < 0) throw std::invalid_argument("barrier: objective variable is fixed");

    SolverStats stats;
    auto phi_of = [&](const std::vector<double>& yy, double t, bool* feasible) -> double {
        double phi = t * yy[static_cast<std::size_t>(cf.objective_variable())];
        *feasible = true;
        for (int k = 0; k < m; ++k) {
            const double f = cf.value(k, yy);
            if (!(f < 0.0)) {
                *feasible = false;
                return std::numeric_limits<double>::infinity();
            }
            phi -= std::log(-f);
        }
        return phi;
    };

    double t = 1.0;
    for (;;) {
        ++stats.barrier_rounds;
        if (stats.barrier_rounds > 64) {
            throw ConvergenceError("barrier: parameter schedule exceeded 64 rounds");
        }
        // Stop once the decrement is tiny on the scale of phi_t = t*y_obj - ...,
        // whose floating-point resolution grows with t; the duality-gap bound
        // m/t only needs a decrement well below 1, so the floor is generous.
        const double newton_tol = std::max(1e-10, 1e-14 * t);
        for (int step = 0;; ++step) {
            if (step >= 300) {
                throw ConvergenceError("barrier: Newton cap reached at t = " + std::to_string(t));
            }
            Eigen::VectorXd g = Eigen::VectorXd::Zero(na);
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(na, na);
            g(obj_pos) += t;
            for (int k = 0; k < m; ++k) {
                const double f = cf.value(k, y);
                if (!(f < 0.0)) {
                    throw ConvergenceError("barrier: iterate left the feasible region");
                }
                const double inv = 1.0 / (-f);
                const std::vector<double> gk = cf.gradient(k, y);
                const std::vector<double> w = cf.term_weights(k, y);
                Eigen::VectorXd gka = Eigen::VectorXd::Zero(na);
                for (int v = 0; v < cf.variable_count(); ++v) {
                    const int a = pos[static_cast<std::size_t>(v)];
                    if (a >= 0) gka(a) = gk[static_cast<std::size_t>(v)];
                }
                g += inv * gka;
                // (1/f^2) grad gradT + (1/-f) * (sum_t w a aT - grad gradT)
                h += (inv * inv - inv) * gka * gka.transpose();
                const LseConstraint& con = cf.constraint(k);
                for (std::size_t tt = 0; tt < con.terms.size(); ++tt) {
                    const auto& exps = con.terms[tt].exponents;
                    for (const auto& [v1, a1] : exps) {
                        const int p1 = pos[static_cast<std::size_t>(v1)];
                        if (p1 < 0) continue;
                        for (const auto& [v2, a2] : exps) {
                            const int p2 = pos[static_cast<std::size_t>(v2)];
                            if (p2 < 0) continue;
                            h(p1, p2) += inv * w[tt] * a1 * a2;
                        }
                    }
                }
            }

            Eigen::VectorXd d;
            double slope = 0.0;
            bool solved = false;
            double ridge = 0.0;
            const double scale = 1.0 + h.diagonal().cwiseAbs().maxCoeff();
            for (int attempt = 0; attempt < 40 && !solved; ++attempt) {
                Eigen::MatrixXd hr = h;
                if (ridge > 0.0) hr.diagonal().array() += ridge;
                const Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
                if (ldlt.info() == Eigen::Success) {
                    d = ldlt.solve(-g);
                    slope = g.dot(d);
                    if (d.allFinite() && slope < 0.0) {
                        solved = true;
                        break;
                    }
                }
                ridge = ridge == 0.0 ? 1e-12 * scale : ridge * 100.0;
            }
            if (!solved) {
                if (g.norm() <= 1e-8 * std::max(1.0, t)) break;  // flat: already centered
                throw ConvergenceError("barrier: Newton system unsolvable even with ridge");
            }

            const double decrement = -slope;
            if (0.5 * decrement <= newton_tol) break;

            bool feasible = false;
            const double phi0 = phi_of(y, t, &feasible);
            double s = 1.0;
            std::vector<double> trial = y;
            bool moved = false;
            while (s >= 1e-14) {
                for (int a = 0; a < na; ++a) {
                    trial[static_cast<std::size_t>(act[static_cast<std::size_t>(a)])] =
                        y[static_cast<std::size_t>(act[static_cast<std::size_t>(a)])] + s * d(a);
                }
                bool ok = false;
                const double phi = phi_of(trial, t, &ok);
                if (ok && phi <= phi0 + 0.25 * s * slope) {
                    moved = true;
                    break;
                }
                s *= 0.5;
            }
            if (!moved) {
                if (0.5 * decrement <= 1e-4) break;  // numerically centered
                throw ConvergenceError("barrier: line search stalled");
            }
            y = trial;
            ++stats.newton_steps;
        }
        if (static_cast<double>(m) / t < tol) {
            stats.gap_estimate = static_cast<double>(m) / t;
            break;
        }
        t *= 10.0;
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) worst = std::max(worst, cf.value(k, y));
    stats.max_constraint_value = worst;
    return BarrierOutcome{std::move(y), stats};
}

AllocationResult baseline_result(const AllocationProblem& p, const Layout& lay) {
    AllocationResult r;
    const int n = p.graph.node_count();
    r.beta_star.resize(static_cast<std::size_t>(lay.element_count));
    for (int e = 0; e < lay.element_count; ++e) {
        r.beta_star[static_cast<std::size_t>(e)] = p.beta_bounds[static_cast<std::size_t>(e)].hi;
    }
    r.delta_star.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        r.delta_star[static_cast<std::size_t>(i)] = p.delta_bounds[static_cast<std::size_t>(i)].lo;
    }
    const SpreadingParams sp = params_from_rates(p, r.beta_star, r.delta_star);
    const SpectralResult eig =
        dominant_metzler_eigenvalue(sp.transmission_matrix(), r.delta_star, 1e-10);
    r.epsilon_star = -eig.value;
    r.lambda_hat_star = p.cap + eig.value;
    r.perron_u = eig.vector;
    for (double& v : r.perron_u) v = std::max(v, 1e-30);  // strict positivity for reports
    r.prevention_spend.assign(static_cast<std::size_t>(lay.element_count), 0.0);
    for (int e = 0; e < lay.element_count; ++e) {
        const auto& f = lay.beta_fam[static_cast<std::size_t>(e)];
        if (f) {
            r.prevention_spend[static_cast<std::size_t>(e)] =
                f->cost(r.beta_star[static_cast<std::size_t>(e)]);
        }
    }
    r.correction_spend.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& f = lay.delta_fam[static_cast<std::size_t>(i)];
        if (f) {
            r.correction_spend[static_cast<std::size_t>(i)] =
                f->cost(r.delta_star[static_cast<std::size_t>(i)]);
        }
    }
    for (double v : r.prevention_spend) r.total_spend += v;
    for (double v : r.correction_spend) r.total_spend += v;
    r.stats.closed_form = true;
    return r;
}

}  // namespace

GpForm build_gp(const AllocationProblem& problem) {
    validate_problem(problem);
    const Layout lay = build_layout(problem);
    return build_form(problem, lay);
}

AllocationResult solve(const AllocationProblem& problem) {
    validate_problem(problem);
    const Layout lay = build_layout(problem);
    const double baseline = baseline_cost(lay);
    if (problem.budget < baseline - 1e-9 * std::max(1.0, baseline)) {
        std::ostringstream os;
        os << "allocate: infeasible budget " << problem.budget
           << "; even the cheapest configuration costs " << baseline;
        throw InfeasibleError(os.str());
    }
    if (!lay.any_free || problem.budget <= baseline + 1e-12 * std::max(1.0, baseline)) {
        return baseline_result(problem, lay);
    }

    const GpForm gp = build_form(problem, lay);
    const ConvexForm cf = log_transform(gp);

    std::vector<double> y0;
    bool started = false;
    bool first = true;
    for (double tau : {1e-3, 1e-4, 1e-8, 1e-12}) {
        y0 = initial_point(problem, lay, tau, first ? 0.5 : tau);
        first = false;
        if (strictly_feasible(cf, y0)) {
            started = true;
            break;
        }
    }
    if (!started) {
        throw InfeasibleError(
            "allocate: could not construct a strictly feasible start; the budget leaves "
            "no interior room");
    }

    std::vector<char> fixed(static_cast<std::size_t>(cf.variable_count()), 0);
    fixed[static_cast<std::size_t>(lay.u_offset)] = 1;  // u_0 = 1 kills the scaling freedom
    BarrierOutcome out = barrier_solve(cf, std::move(y0), fixed, problem.tol);

    AllocationResult r;
    r.stats = out.stats;
    rates_from_y(problem, lay, out.y, &r.beta_star, &r.delta_star);
    r.lambda_hat_star = std::exp(out.y[0]);
    r.epsilon_star = problem.cap - r.lambda_hat_star;
    const int n = problem.graph.node_count();
    r.perron_u.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        r.perron_u[static_cast<std::size_t>(i)] =
            std::exp(out.y[static_cast<std::size_t>(lay.u_offset + i)]);
    }
    r.prevention_spend.assign(static_cast<std::size_t>(lay.element_count), 0.0);
    for (int e = 0; e < lay.element_count; ++e) {
        const auto& f = lay.beta_fam[static_cast<std::size_t>(e)];
        if (f) {
            r.prevention_spend[static_cast<std::size_t>(e)] =
                f->cost(r.beta_star[static_cast<std::size_t>(e)]);
        }
    }
    r.correction_spend.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& f = lay.delta_fam[static_cast<std::size_t>(i)];
        if (f) {
            r.correction_spend[static_cast<std::size_t>(i)] =
                f->cost(r.delta_star[static_cast<std::size_t>(i)]);
        }
    }
    for (double v : r.prevention_spend) r.total_spend += v;
    for (double v : r.correction_spend) r.total_spend += v;
    return r;
}

CertificationReport certify(const AllocationResult& result, const AllocationProblem& problem,
                            double cert_tol) {
    validate_problem(problem);
    const Layout lay = build_layout(problem);
    CertificationReport rep;
    std::ostringstream why;

    const SpreadingParams sp = params_from_rates(problem, result.beta_star, result.delta_star);
    const SpectralResult eig =
        dominant_metzler_eigenvalue(sp.transmission_matrix(), result.delta_star, 1e-10);
    rep.recomputed_lambda1 = eig.value;
    rep.eigenvalue_gap = std::abs(eig.value + result.epsilon_star);
    if (rep.eigenvalue_gap > cert_tol) {
        why << "eigenvalue gap " << rep.eigenvalue_gap << " exceeds " << cert_tol << "; ";
    }

    // Componentwise Perron certificate on M = B* + diag(cap - delta*):
    // M u <= lambda_hat u proves rho(M) <= lambda_hat for any positive u.
    const int n = problem.graph.node_count();
    SparseMatrix m = sp.transmission_matrix();
    for (int i = 0; i < n; ++i) {
        m.add(i, i, problem.cap - result.delta_star[static_cast<std::size_t>(i)]);
    }
    std::vector<double> mu(static_cast<std::size_t>(n));
    m.multiply(result.perron_u, mu);
    double umax = 0.0;
    for (double v : result.perron_u) umax = std::max(umax, v);
    const double lambda_hat = problem.cap - result.epsilon_star;
    rep.min_certificate_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const std::size_t ui = static_cast<std::size_t>(i);
        const double slack =
            (lambda_hat * result.perron_u[ui] - mu[ui]) / (std::abs(lambda_hat) * umax);
        rep.min_certificate_slack = std::min(rep.min_certificate_slack, slack);
    }
    if (rep.min_certificate_slack < -cert_tol) {
        why << "certificate slack " << rep.min_certificate_slack << " below -" << cert_tol
            << "; ";
    }

    // Budget: recompute the spend from the rates, independent of the result's
    // own bookkeeping.  "Saturated" means the spend is within tolerance of
    // the largest spend the bounds admit, i.e. everything protective was
    // already bought and leftover budget is meaningless.
    double total = 0.0;
    double max_total = 0.0;
    for (int e = 0; e < lay.element_count; ++e) {
        const auto& f = lay.beta_fam[static_cast<std::size_t>(e)];
        if (!f) continue;
        total += f->cost(result.beta_star[static_cast<std::size_t>(e)]);
        max_total += f->max_spend();
    }
    for (int i = 0; i < n; ++i) {
        const auto& f = lay.delta_fam[static_cast<std::size_t>(i)];
        if (!f) continue;
        total += f->cost(result.delta_star[static_cast<std::size_t>(i)]);
        max_total += f->max_spend();
    }
    rep.budget_residual = problem.budget - total;
    rep.saturated = total >= max_total - cert_tol * std::max(1.0, max_total);
    rep.budget_binding = std::abs(rep.budget_residual) <= cert_tol * std::max(1.0, problem.budget);
    if (rep.budget_residual < -cert_tol * std::max(1.0, problem.budget)) {
        why << "spend exceeds the budget by " << -rep.budget_residual << "; ";
    } else if (!rep.budget_binding && !rep.saturated) {
        why << "budget slack " << rep.budget_residual
            << " at an interior point (neither binding nor saturated); ";
    }

    rep.max_bound_violation = 0.0;
    for (int e = 0; e < lay.element_count; ++e) {
        const ElementBounds& b = problem.beta_bounds[static_cast<std::size_t>(e)];
        const double x = result.beta_star[static_cast<std::size_t>(e)];
        rep.max_bound_violation =
            std::max({rep.max_bound_violation, b.lo - x, x - b.hi});
    }
    for (int i = 0; i < n; ++i) {
        const ElementBounds& b = problem.delta_bounds[static_cast<std::size_t>(i)];
        const double x = result.delta_star[static_cast<std::size_t>(i)];
        rep.max_bound_violation =
            std::max({rep.max_bound_violation, b.lo - x, x - b.hi});
    }
    if (rep.max_bound_violation > 1e-9) {
        why << "rate bound violated by " << rep.max_bound_violation << "; ";
    }

    rep.detail = why.str();
    rep.certified = rep.detail.empty();
    return rep;
}

}  // namespace netshield
