#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "netshield/graph.hpp"

using netshield::Digraph;
using netshield::Edge;

TEST_SUITE("graph") {

TEST_CASE("single edge stores into the in-row of its destination") {
    Digraph g(2, {{0, 1, 1.0}});
    CHECK(g.adjacency(1, 0) == 1.0);
    CHECK(g.adjacency(0, 1) == 0.0);
    CHECK(g.adjacency(0, 0) == 0.0);
    auto deg = g.weighted_degrees();
    CHECK(deg.out[0] == 1.0);
    CHECK(deg.in[0] == 0.0);
    CHECK(deg.in[1] == 1.0);
    CHECK(deg.out[1] == 0.0);
}

TEST_CASE("duplicate edges are rejected naming both positions") {
    std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 0.5}, {0, 1, 2.0}};
    try {
        Digraph g(3, edges);
        FAIL("expected duplicate edge rejection");
    } catch (const std::invalid_argument& err) {
        const std::string msg = err.what();
        CHECK(msg.find("0 -> 1") != std::string::npos);
        CHECK(msg.find("positions 0") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);
    }
}

TEST_CASE("construction validates counts, endpoints, and weights") {
    CHECK_THROWS_AS(Digraph(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(Digraph(-2, {}), std::invalid_argument);
    CHECK_THROWS_AS(Digraph(2, {{0, 2, 1.0}}), std::out_of_range);
    CHECK_THROWS_AS(Digraph(2, {{-1, 0, 1.0}}), std::out_of_range);
    CHECK_THROWS_AS(Digraph(2, {{0, 1, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Digraph(2, {{0, 1, -0.5}}), std::invalid_argument);
    CHECK_NOTHROW(Digraph(1, {{0, 0, 2.5}}));  // self-loop allowed
}

TEST_CASE("weighted degrees accumulate over parallel-free multi-edges") {
    Digraph g(3, {{0, 1, 1.5}, {0, 2, 0.5}, {2, 1, 2.0}, {1, 1, 0.25}});
    auto deg = g.weighted_degrees();
    CHECK(deg.out[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(deg.in[1] == doctest::Approx(3.75).epsilon(1e-15));
    CHECK(deg.out[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(deg.in[2] == doctest::Approx(0.5).epsilon(1e-15));
    // self-loop counts toward both degrees of its node
    CHECK(deg.out[2] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("adjacency matrix mirrors the in-edge convention") {
    Digraph g(3, {{0, 1, 1.5}, {2, 1, 2.0}, {1, 0, 0.75}});
    auto a = g.adjacency_matrix();
    REQUIRE(a.size() == 3);
    CHECK(a.row(1).size() == 2);
    CHECK(g.adjacency(1, 0) == 1.5);
    CHECK(g.adjacency(1, 2) == 2.0);
    CHECK(g.adjacency(0, 1) == 0.75);
}

TEST_CASE("strong connectivity") {
    // Single isolated node is strongly connected by convention.
    CHECK(is_strongly_connected(Digraph(1, {})));
    // Directed ring.
    CHECK(is_strongly_connected(Digraph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})));
    // Path is not.
    CHECK_FALSE(is_strongly_connected(Digraph(3, {{0, 1, 1}, {1, 2, 1}})));
    // Two nodes, one direction only.
    CHECK_FALSE(is_strongly_connected(Digraph(2, {{0, 1, 1}})));
    // Isolated extra node breaks it.
    CHECK_FALSE(is_strongly_connected(Digraph(4, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}})));
}

TEST_CASE("reversal flips every edge") {
    Digraph g(3, {{0, 1, 1.5}, {1, 2, 2.5}});
    Digraph r = reversed(g);
    CHECK(r.adjacency(0, 1) == 1.5);
    CHECK(r.adjacency(1, 2) == 2.5);
    CHECK(r.adjacency(1, 0) == 0.0);
    auto deg = g.weighted_degrees();
    auto rdeg = r.weighted_degrees();
    for (int i = 0; i < 3; ++i) {
        CHECK(deg.in[i] == rdeg.out[i]);
        CHECK(deg.out[i] == rdeg.in[i]);
    }
}

TEST_CASE("in and out edge lists are sorted by far endpoint") {
    Digraph g(4, {{3, 0, 1}, {1, 0, 1}, {2, 0, 1}, {0, 3, 1}, {0, 1, 1}});
    const auto& in0 = g.in_edges(0);
    REQUIRE(in0.size() == 3);
    CHECK(g.edge(in0[0]).src == 1);
    CHECK(g.edge(in0[1]).src == 2);
    CHECK(g.edge(in0[2]).src == 3);
    const auto& out0 = g.out_edges(0);
    REQUIRE(out0.size() == 2);
    CHECK(g.edge(out0[0]).dst == 1);
    CHECK(g.edge(out0[1]).dst == 3);
}

}  // TEST_SUITE
