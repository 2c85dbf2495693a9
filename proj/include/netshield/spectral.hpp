#pragma once

#include <vector>

#include "netshield/graph.hpp"
#include "netshield/matrix.hpp"

namespace netshield {

struct SpectralResult {
    double value = 0.0;           // eigenvalue estimate
    std::vector<double> vector;   // nonnegative eigenvector, max-norm 1
    int iterations = 0;
    double residual = 0.0;        // max_i |(M u)_i - value * u_i| / ||u||_inf
};

/* Spectral radius of a nonnegative matrix by power iteration.
 *
 * The returned vector doubles as a certificate: the residual bounds the
 * componentwise defect, so M u <= (value + residual) u entrywise wherever
 * u is positive. Convergence is declared when residual <= tol.
 *
 * Engine: plain iteration first; if that stalls (periodic spectra), iterate
 * on M + sI, which shifts every eigenvalue by exactly s and leaves both the
 * eigenvector and the reported residual untouched; as a last resort for
 * stubborn reducible inputs, add a uniform perturbation eta*1*1^T with
 * eta = 1e-12 * max entry and report the residual against the original M.
 * Throws on non-convergence after max_iterations.
 */
SpectralResult spectral_radius(const SparseMatrix& m, double tol = 1e-10,
                               int max_iterations = 100000);

/* Dominant eigenvalue (largest real part) of the stability matrix B - D,
 * where B is nonnegative and D = diag(recovery) with positive entries.
 * Computed as rho(B - D + shift*I) - shift, valid whenever
 * shift >= max recovery rate (making the shifted matrix nonnegative);
 * the result does not depend on the admissible shift chosen.
 */
SpectralResult dominant_metzler_eigenvalue(const SparseMatrix& b,
                                           const std::vector<double>& recovery,
                                           double shift, double tol);

// Convenience overload using shift = max recovery rate.
SpectralResult dominant_metzler_eigenvalue(const SparseMatrix& b,
                                           const std::vector<double>& recovery,
                                           double tol = 1e-10);

/* Walk direction for the PageRank-style score r = (I - alpha*T)^{-1} 1,
 * normalized to sum 1, with T the column-stochastic walk matrix (columns of
 * nodes with no eligible moves are spread uniformly over all nodes).
 *
 *  Forward     - the walker steps from a node to one of its in-neighbors
 *                (up the edges). A node scores high when much of the graph
 *                lies downstream of it: the potent-spreader score.
 *  Reverse     - the walker steps along edge direction (src to dst). A node
 *                scores high when many paths lead into it: the exposure
 *                score (classic PageRank of the graph as stored).
 *  Symmetrized - edge directions are ignored (weights of antiparallel
 *                edges add).
 */
enum class PageRankMode { Forward, Reverse, Symmetrized };

std::vector<double> pagerank(const Digraph& g, double alpha, PageRankMode mode);

}  // namespace netshield
