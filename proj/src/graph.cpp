#include "netshield/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace netshield {

Digraph::Digraph(int node_count, std::vector<Edge> edges)
    : n_(node_count), edges_(std::move(edges)) {
    if (n_ <= 0) throw std::invalid_argument("Digraph: node count must be positive");

    std::unordered_map<long long, int> seen;
    seen.reserve(edges_.size());
    for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
        const Edge& e = edges_[idx];
        if (e.src < 0 || e.src >= n_ || e.dst < 0 || e.dst >= n_) {
            throw std::out_of_range("Digraph: edge " + std::to_string(idx) + " endpoint (" +
                                    std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                                    ") out of range for " + std::to_string(n_) + " nodes");
        }
        if (!std::isfinite(e.weight) || e.weight <= 0.0) {
            throw std::invalid_argument("Digraph: edge " + std::to_string(idx) + " (" +
                                        std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                                        ") has non-positive weight");
        }
        const long long key = static_cast<long long>(e.src) * n_ + e.dst;
        auto [it, inserted] = seen.emplace(key, static_cast<int>(idx));
        if (!inserted) {
            throw std::invalid_argument(
                "Digraph: duplicate edge " + std::to_string(e.src) + " -> " +
                std::to_string(e.dst) + " at positions " + std::to_string(it->second) +
                " and " + std::to_string(idx));
        }
    }

    in_.assign(static_cast<std::size_t>(n_), {});
    out_.assign(static_cast<std::size_t>(n_), {});
    for (std::size_t idx = 0; idx < edges_.size(); ++idx) {
        in_[static_cast<std::size_t>(edges_[idx].dst)].push_back(static_cast<int>(idx));
        out_[static_cast<std::size_t>(edges_[idx].src)].push_back(static_cast<int>(idx));
    }
    for (auto& lst : in_) {
        std::stable_sort(lst.begin(), lst.end(),
                         [this](int a, int b) { return edges_[static_cast<std::size_t>(a)].src <
                                                        edges_[static_cast<std::size_t>(b)].src; });
    }
    for (auto& lst : out_) {
        std::stable_sort(lst.begin(), lst.end(),
                         [this](int a, int b) { return edges_[static_cast<std::size_t>(a)].dst <
                                                        edges_[static_cast<std::size_t>(b)].dst; });
    }
}

const std::vector<int>& Digraph::in_edges(int node) const {
    if (node < 0 || node >= n_) throw std::out_of_range("Digraph::in_edges: node out of range");
    return in_[static_cast<std::size_t>(node)];
}

const std::vector<int>& Digraph::out_edges(int node) const {
    if (node < 0 || node >= n_) throw std::out_of_range("Digraph::out_edges: node out of range");
    return out_[static_cast<std::size_t>(node)];
}

double Digraph::adjacency(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) {
        throw std::out_of_range("Digraph::adjacency: node out of range");
    }
    // in_[i] is sorted by src, and (src, dst) pairs are unique.
    const auto& lst = in_[static_cast<std::size_t>(i)];
    auto it = std::lower_bound(lst.begin(), lst.end(), j, [this](int e, int src) {
        return edges_[static_cast<std::size_t>(e)].src < src;
    });
    if (it != lst.end() && edges_[static_cast<std::size_t>(*it)].src == j) {
        return edges_[static_cast<std::size_t>(*it)].weight;
    }
    return 0.0;
}

SparseMatrix Digraph::adjacency_matrix() const {
    SparseMatrix a(n_);
    for (const Edge& e : edges_) a.add(e.dst, e.src, e.weight);
    return a;
}

WeightedDegrees Digraph::weighted_degrees() const {
    WeightedDegrees d;
    d.in.assign(static_cast<std::size_t>(n_), 0.0);
    d.out.assign(static_cast<std::size_t>(n_), 0.0);
    for (const Edge& e : edges_) {
        d.in[static_cast<std::size_t>(e.dst)] += e.weight;
        d.out[static_cast<std::size_t>(e.src)] += e.weight;
    }
    return d;
}

namespace {

// Nodes reachable from 0 along the chosen incidence lists.
int reachable_count(const Digraph& g, bool forward) {
    std::vector<char> seen(static_cast<std::size_t>(g.node_count()), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        const auto& lst = forward ? g.out_edges(v) : g.in_edges(v);
        for (int eid : lst) {
            const Edge& e = g.edge(eid);
            const int w = forward ? e.dst : e.src;
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
    if (g.node_count() == 1) return true;
    return reachable_count(g, true) == g.node_count() &&
           reachable_count(g, false) == g.node_count();
}

Digraph reversed(const Digraph& g) {
    std::vector<Edge> flipped;
    flipped.reserve(g.edges().size());
    for (const Edge& e : g.edges()) flipped.push_back(Edge{e.dst, e.src, e.weight});
    return Digraph(g.node_count(), std::move(flipped));
}

}  // namespace netshield
