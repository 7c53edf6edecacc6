#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace tw {

// Undirected simple graph with stable integer node labels. Removing a node
// never renumbers the others; dense indices for tensor work are derived on
// demand (see gcn.hpp). No self-loops, no parallel edges; adjacency is kept
// symmetric.
class Graph {
public:
    Graph() = default;

    // Nodes labelled 1..n, no edges.
    static Graph with_nodes(int n);

    void add_node(int id);
    // Ignores self-loops and duplicate edges; returns whether an edge was added.
    // Both endpoints must exist.
    bool add_edge(int u, int v);

    bool has_node(int id) const { return adj_.count(id) != 0; }
    bool has_edge(int u, int v) const;

    int node_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edges_; }
    bool empty() const { return adj_.empty(); }

    const std::set<int>& neighbors(int u) const;  // throws if u absent
    int degree(int u) const { return static_cast<int>(neighbors(u).size()); }
    std::vector<int> nodes() const;  // ascending label order

    // Removes u and connects its former neighbors into a clique.
    // Returns the number of fill edges added. Throws if u absent.
    int eliminate_in_place(int u);

    bool is_clique(const std::set<int>& nodes) const;
    std::vector<std::vector<int>> connected_components() const;

    bool operator==(const Graph&) const = default;

private:
    std::map<int, std::set<int>> adj_;
    int edges_ = 0;
};

// Pure elimination step: a copy of g with u removed and N(u) turned into a
// clique. The input graph is not modified.
Graph eliminate_node(const Graph& g, int u);

struct ErConfig {
    int n = 0;
    // Negative means the 5/n default (clamped to 1 for n <= 5).
    double edge_probability = -1.0;
    std::uint64_t seed = 0;

    double resolved_probability() const;
};

// Erdos-Renyi G(n, p): each of the n(n-1)/2 pairs is an edge independently
// with probability p. Bit-identical output for a given seed.
Graph generate_er(const ErConfig& config);

}  // namespace tw
