#include "netshield/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netshield/errors.hpp"

namespace netshield {

namespace {

struct PowerOutcome {
    bool converged = false;
    double value = 0.0;
    std::vector<double> vec;
    int iterations = 0;
    double residual = 0.0;
};

// Power iteration on M + shift*I + eta*1*1^T with inf-norm normalization.
// Estimate and residual are reported against M + eta*1*1^T: the diagonal
// shift cancels exactly in (M+sI)u - (lambda+s)u, so it changes nothing but
// the convergence behavior.
PowerOutcome power_phase(const SparseMatrix& m, double shift, double eta, double tol,
                         int max_iterations) {
    const int n = m.size();
    std::vector<double> x(static_cast<std::size_t>(n), 1.0);
    std::vector<double> z;
    PowerOutcome out;
    for (int it = 1; it <= max_iterations; ++it) {
        m.multiply(x, z, eta);
        double xz = 0.0;
        double xx = 0.0;
        for (int i = 0; i < n; ++i) {
            xz += x[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
            xx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        }
        const double lambda = xz / xx;
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            resid = std::max(resid, std::abs(z[static_cast<std::size_t>(i)] -
                                             lambda * x[static_cast<std::size_t>(i)]));
        }
        out.iterations = it;
        if (resid <= tol) {
            out.converged = true;
            out.value = lambda;
            out.vec = x;
            out.residual = resid;
            return out;
        }
        double winf = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = z[static_cast<std::size_t>(i)] +
                             shift * x[static_cast<std::size_t>(i)];
            z[static_cast<std::size_t>(i)] = w;
            winf = std::max(winf, std::abs(w));
        }
        if (winf <= 0.0) break;  // direction annihilated; nothing left to iterate
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] / winf;
    }
    out.vec = x;
    return out;
}

void require_nonnegative(const SparseMatrix& m, const char* who) {
    for (int i = 0; i < m.size(); ++i) {
        for (const auto& e : m.row(i)) {
            if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
                throw std::invalid_argument(std::string(who) + ": matrix entries must be finite and nonnegative");
            }
        }
    }
}

}  // namespace

SpectralResult spectral_radius(const SparseMatrix& m, double tol, int max_iterations) {
    if (m.size() == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    if (!(tol > 0.0)) throw std::invalid_argument("spectral_radius: tolerance must be positive");
    if (max_iterations <= 0) throw std::invalid_argument("spectral_radius: max_iterations must be positive");
    require_nonnegative(m, "spectral_radius");

    const double row_sum = m.max_row_sum();
    if (row_sum == 0.0) {
        return SpectralResult{0.0, std::vector<double>(static_cast<std::size_t>(m.size()), 1.0), 0, 0.0};
    }

    int total = 0;

    PowerOutcome plain = power_phase(m, 0.0, 0.0, tol, std::min(max_iterations, 2000));
    total += plain.iterations;
    if (plain.converged) {
        return SpectralResult{plain.value, std::move(plain.vec), total, plain.residual};
    }

    PowerOutcome shifted = power_phase(m, 0.5 * row_sum, 0.0, tol, max_iterations);
    total += shifted.iterations;
    if (shifted.converged) {
        return SpectralResult{shifted.value, std::move(shifted.vec), total, shifted.residual};
    }

    const double eta = 1e-12 * m.max_entry();
    PowerOutcome blurred = power_phase(m, 0.5 * row_sum, eta, tol, max_iterations);
    total += blurred.iterations;
    if (blurred.converged) {
        // Converged on the perturbed operator; report against the original.
        std::vector<double> z;
        m.multiply(blurred.vec, z);
        double xz = 0.0;
        double xx = 0.0;
        for (int i = 0; i < m.size(); ++i) {
            xz += blurred.vec[static_cast<std::size_t>(i)] * z[static_cast<std::size_t>(i)];
            xx += blurred.vec[static_cast<std::size_t>(i)] * blurred.vec[static_cast<std::size_t>(i)];
        }
        const double lambda = xz / xx;
        double resid = 0.0;
        for (int i = 0; i < m.size(); ++i) {
            resid = std::max(resid, std::abs(z[static_cast<std::size_t>(i)] -
                                             lambda * blurred.vec[static_cast<std::size_t>(i)]));
        }
        return SpectralResult{lambda, std::move(blurred.vec), total, resid};
    }

    throw ConvergenceError("spectral_radius: power iteration did not reach tolerance " +
                           std::to_string(tol) + " within " + std::to_string(max_iterations) +
                           " iterations");
}

SpectralResult dominant_metzler_eigenvalue(const SparseMatrix& b,
                                           const std::vector<double>& recovery,
                                           double shift, double tol) {
    const int n = b.size();
    if (static_cast<int>(recovery.size()) != n) {
        throw std::invalid_argument("dominant_metzler_eigenvalue: recovery size mismatch");
    }
    double max_recovery = 0.0;
    for (double d : recovery) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("dominant_metzler_eigenvalue: recovery rates must be positive");
        }
        max_recovery = std::max(max_recovery, d);
    }
    if (shift < max_recovery) {
        throw std::invalid_argument(
            "dominant_metzler_eigenvalue: shift must be at least the largest recovery rate");
    }
    require_nonnegative(b, "dominant_metzler_eigenvalue");

    SparseMatrix shifted = b;
    for (int i = 0; i < n; ++i) {
        const double d = shift - recovery[static_cast<std::size_t>(i)];
        if (d != 0.0) shifted.add(i, i, d);
    }
    SpectralResult r = spectral_radius(shifted, tol);
    r.value -= shift;
    return r;
}

SpectralResult dominant_metzler_eigenvalue(const SparseMatrix& b,
                                           const std::vector<double>& recovery,
                                           double tol) {
    double max_recovery = 0.0;
    for (double d : recovery) max_recovery = std::max(max_recovery, d);
    return dominant_metzler_eigenvalue(b, recovery, max_recovery, tol);
}

namespace {

// r = (I - alpha*T)^{-1} 1 for the column-stochastic walk T built from a:
// T(i, j) = a_ij / colsum_j; columns with no entries spread uniformly.
// Solved by the fixed-point iteration r <- 1 + alpha*T r (contraction: alpha < 1),
// then normalized to sum 1.
std::vector<double> resolvent_rank(const SparseMatrix& a, double alpha) {
    const int n = a.size();
    std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (const auto& e : a.row(i)) colsum[static_cast<std::size_t>(e.col)] += e.value;
    }
    std::vector<double> r(static_cast<std::size_t>(n), 1.0);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    const int max_iterations = 200000;
    for (int it = 0; it < max_iterations; ++it) {
        double dangling = 0.0;
        for (int j = 0; j < n; ++j) {
            if (colsum[static_cast<std::size_t>(j)] == 0.0) dangling += r[static_cast<std::size_t>(j)];
        }
        const double base = 1.0 + alpha * dangling / n;
        double diff = 0.0;
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (const auto& e : a.row(i)) {
                acc += e.value * r[static_cast<std::size_t>(e.col)] /
                       colsum[static_cast<std::size_t>(e.col)];
            }
            const double v = base + alpha * acc;
            next[static_cast<std::size_t>(i)] = v;
            diff = std::max(diff, std::abs(v - r[static_cast<std::size_t>(i)]));
            scale = std::max(scale, std::abs(v));
        }
        r.swap(next);
        if (diff <= 1e-14 * std::max(1.0, scale)) {
            double sum = 0.0;
            for (double v : r) sum += v;
            for (double& v : r) v /= sum;
            return r;
        }
    }
    throw ConvergenceError("pagerank: fixed-point iteration did not converge");
}

}  // namespace

std::vector<double> pagerank(const Digraph& g, double alpha, PageRankMode mode) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("pagerank: alpha must lie strictly between 0 and 1");
    }
    switch (mode) {
        case PageRankMode::Forward:
            return resolvent_rank(g.adjacency_matrix().transposed(), alpha);
        case PageRankMode::Reverse:
            return resolvent_rank(g.adjacency_matrix(), alpha);
        case PageRankMode::Symmetrized: {
            SparseMatrix sym = g.adjacency_matrix();
            const SparseMatrix t = sym.transposed();
            for (int i = 0; i < t.size(); ++i) {
                for (const auto& e : t.row(i)) sym.add(i, e.col, e.value);
            }
            return resolvent_rank(sym, alpha);
        }
    }
    throw std::invalid_argument("pagerank: unknown mode");
}

}  // namespace netshield
