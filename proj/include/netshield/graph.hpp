#pragma once

#include <string>
#include <vector>

#include "netshield/matrix.hpp"

namespace netshield {

struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

struct WeightedDegrees {
    std::vector<double> in;   // in[i]  = sum of weights of edges entering i
    std::vector<double> out;  // out[i] = sum of weights of edges leaving i
};

/* Weighted digraph over nodes 0..n-1 with validated construction.
 *
 * Adjacency convention used throughout the library: a_ij is the weight of
 * the edge j -> i, so row i of the adjacency matrix collects the in-edges
 * of node i (the channels through which node i is reached).
 *
 * Construction rejects: non-positive node counts, endpoints out of range,
 * non-finite or non-positive weights, and duplicate (src, dst) pairs (the
 * error names both positions in the input list). Self-loops are allowed.
 */
class Digraph {
public:
    Digraph(int node_count, std::vector<Edge> edges);

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    // Edge ids entering / leaving a node, sorted by the far endpoint.
    const std::vector<int>& in_edges(int node) const;
    const std::vector<int>& out_edges(int node) const;

    // a_ij: weight of the edge j -> i, or 0 when absent.
    double adjacency(int i, int j) const;

    // Sparse adjacency in the row convention above.
    SparseMatrix adjacency_matrix() const;

    WeightedDegrees weighted_degrees() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> out_;
};

// True when every node reaches every other along directed edges.
// A single node with no edges counts as strongly connected.
bool is_strongly_connected(const Digraph& g);

// Same nodes, every edge flipped.
Digraph reversed(const Digraph& g);

}  // namespace netshield
