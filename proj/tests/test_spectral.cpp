#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "netshield/errors.hpp"
#include "netshield/graph.hpp"
#include "netshield/matrix.hpp"
#include "netshield/spectral.hpp"
#include "oracles.hpp"

using netshield::Digraph;
using netshield::Edge;
using netshield::PageRankMode;
using netshield::SparseMatrix;

namespace {

SparseMatrix weighted_cycle(const std::vector<double>& weights) {
    const int n = static_cast<int>(weights.size());
    SparseMatrix m(n);
    for (int i = 0; i < n; ++i) m.add((i + 1) % n, i, weights[static_cast<std::size_t>(i)]);
    return m;
}

double geometric_mean(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += std::log(v);
    return std::exp(s / static_cast<double>(w.size()));
}

Digraph worstcase_graph_3_6() { return oracles::worstcase_graph(3, 6); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("power iteration matches the dense eigensolver on random irreducible matrices") {
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + (trial * 7) % 49;
        auto m = oracles::random_irreducible_matrix(n, 1000 + static_cast<std::uint64_t>(trial));
        auto mine = netshield::spectral_radius(m, 1e-11);
        const double dense = oracles::spectral_radius_dense(oracles::to_dense(m));
        CHECK(std::abs(mine.value - dense) <= 1e-8 * std::max(1.0, dense));
        CHECK(mine.residual <= 1e-11);
    }
}

TEST_CASE("weighted cycle radius equals the geometric mean of its weights") {
    SUBCASE("uniform") {
        auto r = netshield::spectral_radius(weighted_cycle({0.5, 0.5, 0.5, 0.5, 0.5, 0.5}), 1e-12);
        CHECK(std::abs(r.value - 0.5) <= 1e-10);
    }
    SUBCASE("half protected half exposed") {
        // Three entries at 0.01 and three at 0.5: geometric mean sqrt(0.005).
        auto r = netshield::spectral_radius(weighted_cycle({0.01, 0.01, 0.01, 0.5, 0.5, 0.5}), 1e-12);
        CHECK(std::abs(r.value - 0.07071067811865475) <= 1e-10);
    }
    SUBCASE("mixed magnitudes") {
        std::vector<double> w{0.2, 1.7, 0.9, 0.05, 2.4};
        auto r = netshield::spectral_radius(weighted_cycle(w), 1e-12);
        CHECK(std::abs(r.value - geometric_mean(w)) <= 1e-10);
    }
}

TEST_CASE("undirected star radius is sqrt(n-1)") {
    // Center 0 linked both ways with n-1 leaves; periodic spectrum, so this
    // also exercises the exact diagonal-shift phase.
    const int n = 10;
    SparseMatrix m(n);
    for (int leaf = 1; leaf < n; ++leaf) {
        m.add(0, leaf, 1.0);
        m.add(leaf, 0, 1.0);
    }
    auto r = netshield::spectral_radius(m, 1e-12);
    CHECK(std::abs(r.value - 3.0) <= 1e-10);
    CHECK(r.residual <= 1e-12);
}

TEST_CASE("zero and near-trivial matrices") {
    auto zero = netshield::spectral_radius(SparseMatrix(4), 1e-12);
    CHECK(zero.value == 0.0);
    CHECK(zero.residual == 0.0);

    SparseMatrix one(1);
    one.add(0, 0, 2.25);
    auto r = netshield::spectral_radius(one, 1e-12);
    CHECK(r.value == doctest::Approx(2.25).epsilon(1e-12));

    // Nilpotent (strictly triangular): radius 0.
    SparseMatrix nil(3);
    nil.add(1, 0, 3.0);
    nil.add(2, 1, 4.0);
    auto rn = netshield::spectral_radius(nil, 1e-12);
    CHECK(std::abs(rn.value) <= 1e-12);
}

TEST_CASE("reducible source-plus-cycle matrix still certifies radius 1") {
    auto g = worstcase_graph_3_6();
    auto r = netshield::spectral_radius(g.adjacency_matrix(), 1e-11);
    const double dense = oracles::spectral_radius_dense(oracles::to_dense(g.adjacency_matrix()));
    CHECK(std::abs(dense - 1.0) <= 1e-12);
    CHECK(std::abs(r.value - 1.0) <= 1e-8);
}

TEST_CASE("certificate: residual bounds the componentwise defect") {
    for (int trial = 0; trial < 10; ++trial) {
        auto m = oracles::random_irreducible_matrix(12, 77 + static_cast<std::uint64_t>(trial));
        const double tol = 1e-11;
        auto r = netshield::spectral_radius(m, tol);
        std::vector<double> mu;
        m.multiply(r.vector, mu);
        double uinf = 0.0;
        for (double v : r.vector) uinf = std::max(uinf, std::abs(v));
        for (std::size_t i = 0; i < mu.size(); ++i) {
            CHECK(mu[i] <= r.value * r.vector[i] + (tol + 1e-15) * uinf);
            CHECK(r.vector[i] >= 0.0);
        }
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(netshield::spectral_radius(SparseMatrix(0), 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(netshield::spectral_radius(SparseMatrix(3), 0.0), std::invalid_argument);
    SparseMatrix neg(2);
    neg.add(0, 1, -1.0);
    CHECK_THROWS_AS(netshield::spectral_radius(neg, 1e-10), std::invalid_argument);
}

TEST_CASE("stability matrix: cycle example") {
    // Transmission 0.5 around a 6-cycle, recovery 0.3 everywhere: dominant
    // eigenvalue 0.5 - 0.3 = 0.2.
    auto b = weighted_cycle({0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    std::vector<double> recovery(6, 0.3);
    auto r = netshield::dominant_metzler_eigenvalue(b, recovery, 1e-12);
    CHECK(std::abs(r.value - 0.2) <= 1e-10);
}

TEST_CASE("stability matrix: closed forms and shift invariance") {
    SUBCASE("self-loop node") {
        SparseMatrix b(1);
        b.add(0, 0, 0.8);
        auto r = netshield::dominant_metzler_eigenvalue(b, {0.3}, 1e-12);
        CHECK(std::abs(r.value - 0.5) <= 1e-12);
    }
    SUBCASE("no transmission: minus the smallest recovery") {
        SparseMatrix b(3);
        auto r = netshield::dominant_metzler_eigenvalue(b, {0.4, 0.2, 0.9}, 1e-12);
        CHECK(std::abs(r.value - (-0.2)) <= 1e-12);
    }
    SUBCASE("choice of admissible shift does not matter") {
        for (int trial = 0; trial < 8; ++trial) {
            auto b = oracles::random_irreducible_matrix(9, 500 + static_cast<std::uint64_t>(trial));
            std::vector<double> recovery(9);
            for (int i = 0; i < 9; ++i) recovery[static_cast<std::size_t>(i)] = 0.1 + 0.07 * i;
            auto r1 = netshield::dominant_metzler_eigenvalue(b, recovery, 0.8, 1e-12);
            auto r2 = netshield::dominant_metzler_eigenvalue(b, recovery, 8.1, 1e-12);
            CHECK(std::abs(r1.value - r2.value) <= 1e-10);
        }
    }
    SUBCASE("shift below the largest recovery rate is rejected") {
        SparseMatrix b(2);
        b.add(0, 1, 1.0);
        b.add(1, 0, 1.0);
        CHECK_THROWS_AS(netshield::dominant_metzler_eigenvalue(b, {0.5, 0.9}, 0.6, 1e-10),
                        std::invalid_argument);
    }
}

TEST_CASE("stability matrix agrees with the dense abscissa oracle") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + trial;
        auto b = oracles::random_irreducible_matrix(n, 9000 + static_cast<std::uint64_t>(trial));
        std::vector<double> recovery(static_cast<std::size_t>(n));
        std::mt19937_64 rng(42 + static_cast<std::uint64_t>(trial));
        std::uniform_real_distribution<double> d(0.1, 1.2);
        for (auto& v : recovery) v = d(rng);
        auto mine = netshield::dominant_metzler_eigenvalue(b, recovery, 1e-11);
        Eigen::MatrixXd dense = oracles::to_dense(b);
        for (int i = 0; i < n; ++i) dense(i, i) -= recovery[static_cast<std::size_t>(i)];
        CHECK(std::abs(mine.value - oracles::spectral_abscissa_dense(dense)) <= 1e-8);
    }
}

TEST_CASE("pagerank: symmetric complete graph is uniform in every mode") {
    std::vector<Edge> edges;
    const int n = 5;
    for (int s = 0; s < n; ++s) {
        for (int d = 0; d < n; ++d) {
            if (s != d) edges.push_back({s, d, 1.0});
        }
    }
    Digraph g(n, std::move(edges));
    for (auto mode : {PageRankMode::Forward, PageRankMode::Reverse, PageRankMode::Symmetrized}) {
        auto r = netshield::pagerank(g, 0.37, mode);
        for (double v : r) CHECK(std::abs(v - 1.0 / n) <= 1e-12);
    }
}

TEST_CASE("pagerank: directed cycle is uniform") {
    Digraph g(7, [] {
        std::vector<Edge> e;
        for (int i = 0; i < 7; ++i) e.push_back({i, (i + 1) % 7, 1.0});
        return e;
    }());
    auto r = netshield::pagerank(g, 0.85, PageRankMode::Forward);
    for (double v : r) CHECK(std::abs(v - 1.0 / 7) <= 1e-12);
}

TEST_CASE("pagerank: forward mode ranks the feeders above the cycle") {
    auto g = worstcase_graph_3_6();
    auto r = netshield::pagerank(g, 0.1, PageRankMode::Forward);
    double min_source = 1e300;
    double max_cycle = -1e300;
    for (int i = 0; i < 3; ++i) min_source = std::min(min_source, r[static_cast<std::size_t>(i)]);
    for (int i = 3; i < 9; ++i) max_cycle = std::max(max_cycle, r[static_cast<std::size_t>(i)]);
    CHECK(min_source > max_cycle);

    // Reverse mode flips the story: the cycle receives the mass.
    auto rr = netshield::pagerank(g, 0.1, PageRankMode::Reverse);
    double max_source = -1e300;
    double min_cycle = 1e300;
    for (int i = 0; i < 3; ++i) max_source = std::max(max_source, rr[static_cast<std::size_t>(i)]);
    for (int i = 3; i < 9; ++i) min_cycle = std::min(min_cycle, rr[static_cast<std::size_t>(i)]);
    CHECK(min_cycle > max_source);
}

TEST_CASE("pagerank matches a dense linear-solve oracle in every mode") {
    auto check_mode = [](const Digraph& g, PageRankMode mode, double alpha) {
        const int n = g.node_count();
        SparseMatrix base = g.adjacency_matrix();
        SparseMatrix walk(n);
        if (mode == PageRankMode::Forward) {
            walk = base.transposed();
        } else if (mode == PageRankMode::Reverse) {
            walk = base;
        } else {
            walk = base;
            SparseMatrix t = base.transposed();
            for (int i = 0; i < n; ++i) {
                for (const auto& e : t.row(i)) walk.add(i, e.col, e.value);
            }
        }
        Eigen::MatrixXd a = oracles::to_dense(walk);
        Eigen::MatrixXd t_mat = Eigen::MatrixXd::Zero(n, n);
        for (int j = 0; j < n; ++j) {
            const double cs = a.col(j).sum();
            if (cs == 0.0) {
                for (int i = 0; i < n; ++i) t_mat(i, j) = 1.0 / n;
            } else {
                for (int i = 0; i < n; ++i) t_mat(i, j) = a(i, j) / cs;
            }
        }
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - alpha * t_mat;
        Eigen::VectorXd expected = lhs.partialPivLu().solve(Eigen::VectorXd::Ones(n));
        expected /= expected.sum();

        auto mine = netshield::pagerank(g, alpha, mode);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(mine[static_cast<std::size_t>(i)] - expected(i)) <= 1e-10);
        }
    };

    auto wc = worstcase_graph_3_6();
    for (auto mode : {PageRankMode::Forward, PageRankMode::Reverse, PageRankMode::Symmetrized}) {
        check_mode(wc, mode, 0.1);
        check_mode(wc, mode, 0.85);
    }
    for (int trial = 0; trial < 5; ++trial) {
        auto g = oracles::random_strongly_connected(8 + trial, 300 + static_cast<std::uint64_t>(trial));
        for (auto mode : {PageRankMode::Forward, PageRankMode::Reverse, PageRankMode::Symmetrized}) {
            check_mode(g, mode, 0.6);
        }
    }
}

TEST_CASE("pagerank validates alpha") {
    Digraph g(2, {{0, 1, 1.0}});
    CHECK_THROWS_AS(netshield::pagerank(g, 0.0, PageRankMode::Forward), std::invalid_argument);
    CHECK_THROWS_AS(netshield::pagerank(g, 1.0, PageRankMode::Forward), std::invalid_argument);
    CHECK_THROWS_AS(netshield::pagerank(g, -0.3, PageRankMode::Forward), std::invalid_argument);
}

}  // TEST_SUITE
