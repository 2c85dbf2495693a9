#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "netshield/dynamics.hpp"
#include "netshield/graph.hpp"
#include "netshield/rng.hpp"
#include "oracles.hpp"

using namespace netshield;

namespace {

Digraph edgeless(int n) {
    // Digraph requires at least one node; an empty edge list gives B = 0.
    return Digraph(n, {});
}

Digraph cycle_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return Digraph(n, std::move(edges));
}

// Six-cycle with three quiet nodes and three loud ones, delta = 0.3:
// margin = 0.3 - (0.01^3 * 0.5^3)^{1/6}, comfortably positive.
SpreadingParams mixed_cycle_params() {
    return SpreadingParams::node_rates(cycle_graph(6), {0.01, 0.5, 0.01, 0.5, 0.01, 0.5},
                                       std::vector<double>(6, 0.3));
}

double two_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("stability margin with no edges is the smallest recovery rate") {
    const auto params = SpreadingParams::edge_rates(edgeless(3), {}, {0.3, 0.3, 0.3});
    CHECK(stability_margin(params) == doctest::Approx(0.3).epsilon(1e-12));
    const auto varied = SpreadingParams::edge_rates(edgeless(3), {}, {0.7, 0.2, 0.9});
    CHECK(stability_margin(varied) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("uniform node scaling on the adversarial graph gives margin 0.3 - 0.5") {
    const auto g = oracles::worstcase_graph(3, 6);
    const auto params =
        SpreadingParams::node_rates(g, std::vector<double>(9, 0.5), std::vector<double>(9, 0.3));
    const double margin = stability_margin(params);
    CHECK(std::abs(margin - (-0.2)) <= 1e-8);
    // Independent route: dense abscissa of B - D.
    Eigen::MatrixXd dense = oracles::to_dense(params.transmission_matrix());
    for (int i = 0; i < 9; ++i) dense(i, i) -= 0.3;
    CHECK(std::abs(-oracles::spectral_abscissa_dense(dense) - margin) <= 1e-8);
}

TEST_CASE("cycle margin follows the geometric mean of the rates") {
    const auto params = mixed_cycle_params();
    const double expected = 0.3 - std::pow(0.01 * 0.01 * 0.01 * 0.5 * 0.5 * 0.5, 1.0 / 6.0);
    CHECK(std::abs(stability_margin(params, 1e-12) - expected) <= 1e-10);
    Eigen::MatrixXd dense = oracles::to_dense(params.transmission_matrix());
    for (int i = 0; i < 6; ++i) dense(i, i) -= 0.3;
    CHECK(std::abs(-oracles::spectral_abscissa_dense(dense) - expected) <= 1e-8);
}

TEST_CASE("margin is monotone in the rates") {
    const auto g = cycle_graph(4);
    const std::vector<double> delta(4, 0.4);
    const auto base = SpreadingParams::edge_rates(g, {0.1, 0.2, 0.3, 0.1}, delta);
    auto bumped_beta = SpreadingParams::edge_rates(g, {0.1, 0.5, 0.3, 0.1}, delta);
    CHECK(stability_margin(bumped_beta) <= stability_margin(base) + 1e-12);
    auto bumped_delta = SpreadingParams::edge_rates(g, {0.1, 0.2, 0.3, 0.1}, {0.4, 0.9, 0.4, 0.4});
    CHECK(stability_margin(bumped_delta) >= stability_margin(base) - 1e-12);
}

TEST_CASE("parameter validation rejects malformed rates") {
    const auto g = cycle_graph(3);
    CHECK_THROWS_AS(SpreadingParams::edge_rates(g, {0.1, 0.2}, {0.3, 0.3, 0.3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpreadingParams::edge_rates(g, {0.1, 0.2, 0.0}, {0.3, 0.3, 0.3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpreadingParams::edge_rates(g, {0.1, 0.2, 0.3}, {0.3, -0.1, 0.3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SpreadingParams::node_rates(g, {0.1, 0.2, 0.3}, {0.3, 0.3}),
                    std::invalid_argument);
}

TEST_CASE("node scaling multiplies edge weights into the transmission matrix") {
    const Digraph g(2, {{0, 1, 2.5}});
    const auto params = SpreadingParams::node_rates(g, {0.3, 0.4}, {1.0, 1.0});
    // Edge 0 -> 1 carries beta_1 * weight = 0.4 * 2.5.
    CHECK(params.beta()[0] == doctest::Approx(1.0).epsilon(1e-15));
    const auto& row = params.transmission_matrix().row(1);
    REQUIRE(row.size() == 1);
    CHECK(row[0].col == 0);
    CHECK(row[0].value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mean-field with no transmission decays like e^{-delta t}") {
    const auto params = SpreadingParams::edge_rates(edgeless(2), {}, {0.3, 0.5});
    for (int node = 0; node < 2; ++node) {
        const double delta = params.delta()[static_cast<std::size_t>(node)];
        const auto tr = meanfield_simulate(params, {0.8, 0.6}, 1.0 / delta);
        CHECK(tr.times.back() == doctest::Approx(1.0 / delta).epsilon(1e-14));
        const double expected =
            (node == 0 ? 0.8 : 0.6) * std::exp(-delta * tr.times.back());
        CHECK(std::abs(tr.values.back()[static_cast<std::size_t>(node)] - expected) <= 1e-6);
    }
}

TEST_CASE("the disease-free state is invariant under the mean-field flow") {
    const auto params = mixed_cycle_params();
    const auto tr = meanfield_simulate(params, std::vector<double>(6, 0.0), 5.0);
    for (const auto& row : tr.values) {
        for (double v : row) CHECK(v == 0.0);
    }
}

TEST_CASE("stable mean-field trajectories decay at the stability margin's rate") {
    const auto params = mixed_cycle_params();
    const double margin = stability_margin(params);
    REQUIRE(margin > 0.05);
    const auto tr = meanfield_simulate(params, std::vector<double>(6, 0.9), 60.0);
    const double rate = fit_decay_rate(tr);
    CHECK(rate >= margin - 0.02);
    CHECK(rate <= margin + 0.1);
    // The decay bound itself: ||p(t)|| <= ||p(0)|| * K * e^{-(margin - tol) t}.
    const double k_fit = two_norm(tr.values.back()) /
                         (two_norm(tr.values.front()) * std::exp(-rate * tr.times.back()));
    CHECK(k_fit > 0.0);
}

TEST_CASE("oversized steps are reported instead of silently clamped") {
    const auto params = SpreadingParams::edge_rates(edgeless(1), {}, {0.3});
    CHECK_THROWS_AS(meanfield_simulate(params, {1.0}, 40.0, 20.0), std::invalid_argument);
}

TEST_CASE("initial probabilities outside [0,1] are rejected") {
    const auto params = SpreadingParams::edge_rates(edgeless(2), {}, {0.3, 0.3});
    CHECK_THROWS_AS(meanfield_simulate(params, {0.5, 1.2}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(meanfield_simulate(params, {-0.1, 0.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(meanfield_simulate(params, {0.5}, 1.0), std::invalid_argument);
}

TEST_CASE("runge-kutta converges at fourth order") {
    const auto params = mixed_cycle_params();
    const std::vector<double> p0 = {0.9, 0.1, 0.5, 0.3, 0.7, 0.2};
    const double h = 0.25;
    const auto coarse = meanfield_simulate(params, p0, 2.0, h);
    const auto medium = meanfield_simulate(params, p0, 2.0, h / 2.0);
    const auto fine = meanfield_simulate(params, p0, 2.0, h / 4.0);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
        e1 = std::max(e1, std::abs(coarse.values.back()[i] - medium.values.back()[i]));
        e2 = std::max(e2, std::abs(medium.values.back()[i] - fine.values.back()[i]));
    }
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.5);
}

TEST_CASE("isolated infected node recovers in mean time 1/delta") {
    const auto params = SpreadingParams::edge_rates(edgeless(1), {}, {0.3});
    const int trials = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < trials; ++k) {
        const auto tr = stochastic_simulate(params, {1}, 1e6, derive_seed(42, k));
        REQUIRE(tr.events.size() == 1);
        sum += tr.events[0].time;
        sumsq += tr.events[0].time * tr.events[0].time;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sumsq / trials - mean * mean) * trials / (trials - 1.0));
    const double se = sd / std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(mean - 1.0 / 0.3) <= 3.0 * se);
}

TEST_CASE("all-susceptible start produces no events") {
    const auto params = mixed_cycle_params();
    const auto tr = stochastic_simulate(params, std::vector<int>(6, 0), 10.0, 7);
    CHECK(tr.events.empty());
    CHECK(tr.times.size() == 1);
    CHECK(tr.values.size() == 1);
}

TEST_CASE("single-clock race: chain infection time averages 1/beta") {
    const Digraph g(2, {{0, 1, 1.0}});
    const auto params = SpreadingParams::edge_rates(g, {0.7}, {1e-9, 0.3});
    const int trials = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < trials; ++k) {
        const auto tr = stochastic_simulate(params, {1, 0}, 50.0, derive_seed(99, k));
        double first = -1.0;
        for (const auto& ev : tr.events) {
            if (ev.node == 1 && ev.new_state == 1) {
                first = ev.time;
                break;
            }
        }
        REQUIRE(first >= 0.0);
        sum += first;
        sumsq += first * first;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt((sumsq / trials - mean * mean) * trials / (trials - 1.0));
    const double se = sd / std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(mean - 1.0 / 0.7) <= 3.0 * se);
}

TEST_CASE("stochastic runs are bit-identical for a fixed seed") {
    const auto params = mixed_cycle_params();
    const std::vector<int> x0 = {1, 1, 0, 0, 1, 0};
    const auto a = stochastic_simulate(params, x0, 25.0, 123456);
    const auto b = stochastic_simulate(params, x0, 25.0, 123456);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t i = 0; i < a.times.size(); ++i) CHECK(a.times[i] == b.times[i]);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].time == b.events[i].time);
        CHECK(a.events[i].node == b.events[i].node);
        CHECK(a.events[i].new_state == b.events[i].new_state);
    }
    const auto c = stochastic_simulate(params, x0, 25.0, 654321);
    bool differs = c.times.size() != a.times.size();
    for (std::size_t i = 0; !differs && i < std::min(a.times.size(), c.times.size()); ++i) {
        differs = a.times[i] != c.times[i];
    }
    CHECK(differs);
}

TEST_CASE("subcritical spreads go extinct within the guaranteed horizon") {
    const auto params = mixed_cycle_params();
    const double margin = stability_margin(params);
    const auto stats = extinction_fraction(params, std::vector<int>(6, 1), 200.0 / margin, 300, 2024);
    CHECK(stats.trials == 300);
    CHECK(stats.fraction >= 0.97);
    // Trial seeds derive from the index, so a rerun reproduces the count.
    const auto again =
        extinction_fraction(params, std::vector<int>(6, 1), 200.0 / margin, 300, 2024);
    CHECK(again.extinct == stats.extinct);
}

TEST_CASE("four-compartment latency chain matches its closed form") {
    const auto g = cycle_graph(2);
    const int n = 2;
    const double eps = 0.7, delta = 0.3;
    const GseivParams params(g, {0.0, 0.0}, {0.0, 0.0}, {eps, eps}, {delta, delta}, {0.2, 0.2},
                             {0.4, 0.4});
    std::vector<double> state0(4 * n, 0.0);
    state0[n + 0] = 1.0;  // node 0 fully exposed
    state0[n + 1] = 1.0;  // node 1 fully exposed
    const double t = 2.0;
    const auto tr = gseiv_meanfield(params, state0, t);
    for (int i = 0; i < n; ++i) {
        const double e_expected = std::exp(-eps * t);
        const double i_expected =
            eps / (delta - eps) * (std::exp(-eps * t) - std::exp(-delta * t));
        CHECK(std::abs(tr.values.back()[n + i] - e_expected) <= 1e-6);
        CHECK(std::abs(tr.values.back()[2 * n + i] - i_expected) <= 1e-6);
    }
}

TEST_CASE("compartment mass is conserved along the trajectory") {
    const auto g = oracles::random_strongly_connected(5, 31);
    const int n = 5;
    const GseivParams params(g, std::vector<double>(n, 0.2), std::vector<double>(n, 0.4),
                             std::vector<double>(n, 0.6), std::vector<double>(n, 0.3),
                             std::vector<double>(n, 0.1), std::vector<double>(n, 0.5));
    std::vector<double> state0(4 * n, 0.0);
    for (int i = 0; i < n; ++i) {
        state0[i] = 0.6;
        state0[n + i] = 0.2;
        state0[2 * n + i] = 0.15;
        state0[3 * n + i] = 0.05;
    }
    const auto tr = gseiv_meanfield(params, state0, 20.0);
    for (const auto& row : tr.values) {
        for (int i = 0; i < n; ++i) {
            const double sum = row[i] + row[n + i] + row[2 * n + i] + row[3 * n + i];
            CHECK(std::abs(sum - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("non-normalized initial compartments are rejected") {
    const auto g = cycle_graph(2);
    const GseivParams params(g, {0.1, 0.1}, {0.1, 0.1}, {0.5, 0.5}, {0.3, 0.3}, {0.1, 0.1},
                             {0.2, 0.2});
    std::vector<double> bad(8, 0.3);  // sums to 1.2 per node
    CHECK_THROWS_AS(gseiv_meanfield(params, bad, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gseiv_meanfield(params, std::vector<double>(7, 0.25), 1.0),
                    std::invalid_argument);
}

TEST_CASE("all-vigilant start settles where vigilance gain and decay balance") {
    const auto g = cycle_graph(3);
    const int n = 3;
    const double rate = 0.5;
    const GseivParams params(g, std::vector<double>(n, 0.8), std::vector<double>(n, 0.9),
                             std::vector<double>(n, 0.6), std::vector<double>(n, 0.4),
                             std::vector<double>(n, rate), std::vector<double>(n, rate));
    std::vector<double> state0(4 * n, 0.0);
    for (int i = 0; i < n; ++i) state0[3 * n + i] = 1.0;
    const auto tr = gseiv_meanfield(params, state0, 80.0);
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(tr.values.back()[i] - 0.5) <= 1e-6);           // S
        CHECK(tr.values.back()[n + i] == 0.0);                        // E never seeded
        CHECK(tr.values.back()[2 * n + i] == 0.0);                    // I never seeded
        CHECK(std::abs(tr.values.back()[3 * n + i] - 0.5) <= 1e-6);   // V
    }
}

TEST_CASE("gseiv stability with zero transmission is minus the slowest leak") {
    const auto g = cycle_graph(3);
    const GseivParams params(g, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.5, 0.7, 0.9},
                             {0.4, 0.6, 0.8}, {0.1, 0.1, 0.1}, {0.2, 0.2, 0.2});
    const auto result = gseiv_is_stable(params);
    CHECK(result.stable);
    CHECK(std::abs(result.abscissa - (-0.4)) <= 1e-8);
}

TEST_CASE("heavy vigilance stabilizes a node that is otherwise supercritical") {
    const Digraph g(1, {{0, 0, 1.0}});
    const double eps = 0.5, delta = 0.4, gamma = 0.3;
    const GseivParams relaxed(g, {2.0}, {2.0}, {eps}, {delta}, {0.0}, {gamma});
    CHECK_FALSE(gseiv_is_stable(relaxed).stable);
    const GseivParams vigilant(g, {2.0}, {2.0}, {eps}, {delta}, {1e6}, {gamma});
    const auto result = gseiv_is_stable(vigilant);
    CHECK(result.stable);
    // In the fully vigilant limit the block triangular spectrum is {-eps, -delta}.
    CHECK(std::abs(result.abscissa - (-delta)) <= 1e-3);
}

TEST_CASE("stability matrix matches the dense eigensolver") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const int n = 5;
        const auto g = oracles::random_strongly_connected(n, seed);
        std::mt19937_64 rng(seed * 7 + 1);
        std::uniform_real_distribution<double> unit(0.05, 1.0);
        auto draw = [&] {
            std::vector<double> v(n);
            for (double& x : v) x = unit(rng);
            return v;
        };
        const GseivParams params(g, draw(), draw(), draw(), draw(), draw(), draw());
        const auto result = gseiv_is_stable(params);
        const double dense =
            oracles::spectral_abscissa_dense(oracles::to_dense(gseiv_stability_matrix(params)));
        CHECK(std::abs(result.abscissa - dense) <= 1e-8);
        CHECK(result.stable == (dense < -1e-9));
    }
}

TEST_CASE("large instances switch to the shifted power iteration and still agree") {
    const int n = 210;
    const auto g = oracles::random_strongly_connected(n, 77, 0.03);
    std::vector<double> be(n, 0.05), bi(n, 0.08), eps(n, 0.6), delta(n, 0.5), theta(n, 0.2),
        gamma(n, 0.4);
    const GseivParams params(g, be, bi, eps, delta, theta, gamma);
    const auto result = gseiv_is_stable(params);
    const double dense =
        oracles::spectral_abscissa_dense(oracles::to_dense(gseiv_stability_matrix(params)));
    CHECK(std::abs(result.abscissa - dense) <= 1e-6);
    CHECK(result.stable == (dense < -1e-9));
}

TEST_CASE("in the SIS limit the four-compartment threshold matches the margin") {
    // Instant latency (huge epsilon), no vigilance inflow (theta = 0) and fast
    // relaxation make the four-compartment model collapse onto the two-state
    // one; the stability boundary then sits at beta* = delta / rho(A) = 0.3.
    const auto g = cycle_graph(4);
    const int n = 4;
    const double delta = 0.3;
    auto gseiv_at = [&](double beta) {
        return gseiv_is_stable(GseivParams(g, std::vector<double>(n, beta),
                                           std::vector<double>(n, beta),
                                           std::vector<double>(n, 1e3),
                                           std::vector<double>(n, delta),
                                           std::vector<double>(n, 0.0),
                                           std::vector<double>(n, 1e3)));
    };
    CHECK(gseiv_at(0.3 * 0.98).stable);
    CHECK_FALSE(gseiv_at(0.3 * 1.02).stable);
    const auto sis_low = SpreadingParams::node_rates(g, std::vector<double>(n, 0.3 * 0.98),
                                                     std::vector<double>(n, delta));
    const auto sis_high = SpreadingParams::node_rates(g, std::vector<double>(n, 0.3 * 1.02),
                                                      std::vector<double>(n, delta));
    CHECK(stability_margin(sis_low) > 0.0);
    CHECK(stability_margin(sis_high) < 0.0);
}

TEST_CASE("gseiv rejects malformed rate arrays") {
    const auto g = cycle_graph(2);
    CHECK_THROWS_AS(GseivParams(g, {0.1}, {0.1, 0.1}, {0.5, 0.5}, {0.3, 0.3}, {0.1, 0.1},
                                {0.2, 0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GseivParams(g, {0.1, 0.1}, {0.1, 0.1}, {0.0, 0.5}, {0.3, 0.3}, {0.1, 0.1},
                                {0.2, 0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GseivParams(g, {0.1, 0.1}, {0.1, 0.1}, {0.5, 0.5}, {0.3, 0.3}, {0.1, 0.1},
                                {0.0, 0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GseivParams(g, {-0.1, 0.1}, {0.1, 0.1}, {0.5, 0.5}, {0.3, 0.3}, {0.1, 0.1},
                                {0.2, 0.2}),
                    std::invalid_argument);
    // theta = 0 is legitimate: vigilance inflow may be absent.
    CHECK_NOTHROW(GseivParams(g, {0.1, 0.1}, {0.1, 0.1}, {0.5, 0.5}, {0.3, 0.3}, {0.0, 0.0},
                              {0.2, 0.2}));
}

}  // TEST_SUITE
