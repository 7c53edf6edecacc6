#pragma once

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "tw/elimination.hpp"
#include "tw/graph.hpp"
#include "tw/rng.hpp"

namespace fixtures {

// 7-node tree used across the suite, with a suboptimal ordering whose widest
// elimination step forms a 3-clique (width 2) and an optimal leaves-first
// ordering (width 1).
//
//   2 - 1 - 3 - 4 - 5
//               |
//               6 - 7
inline tw::Graph seven_node_tree() {
    tw::Graph g = tw::Graph::with_nodes(7);
    g.add_edge(1, 2);
    g.add_edge(1, 3);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    g.add_edge(4, 6);
    g.add_edge(6, 7);
    return g;
}

inline tw::EliminationOrder tree_order_width2() {
    return {{1, 3, 2, 4, 5, 6, 7}};
}

inline tw::EliminationOrder tree_order_width1() {
    return {{2, 5, 7, 6, 4, 3, 1}};
}

inline tw::Graph complete_graph(int n) {
    tw::Graph g = tw::Graph::with_nodes(n);
    for (int u = 1; u <= n; ++u) {
        for (int v = u + 1; v <= n; ++v) {
            g.add_edge(u, v);
        }
    }
    return g;
}

inline tw::Graph path_graph(int n) {
    tw::Graph g = tw::Graph::with_nodes(n);
    for (int u = 1; u < n; ++u) {
        g.add_edge(u, u + 1);
    }
    return g;
}

inline tw::Graph cycle_graph(int n) {
    tw::Graph g = path_graph(n);
    g.add_edge(n, 1);
    return g;
}

inline tw::Graph star_graph(int leaves) {
    tw::Graph g = tw::Graph::with_nodes(leaves + 1);
    for (int u = 2; u <= leaves + 1; ++u) {
        g.add_edge(1, u);
    }
    return g;
}

inline tw::Graph grid_graph(int rows, int cols) {
    tw::Graph g = tw::Graph::with_nodes(rows * cols);
    auto id = [cols](int r, int c) { return r * cols + c + 1; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) {
                g.add_edge(id(r, c), id(r, c + 1));
            }
            if (r + 1 < rows) {
                g.add_edge(id(r, c), id(r + 1, c));
            }
        }
    }
    return g;
}

// Random tree via a random attachment point per new node.
inline tw::Graph random_tree(int n, std::uint64_t seed) {
    tw::Graph g = tw::Graph::with_nodes(n);
    tw::Rng rng(seed);
    for (int u = 2; u <= n; ++u) {
        g.add_edge(u, 1 + static_cast<int>(rng.below(u - 1)));
    }
    return g;
}

// k-tree: start from K_{k+1}, then attach each new node to a random existing
// k-clique. Treewidth is exactly k by construction (for n > k).
inline tw::Graph random_k_tree(int n, int k, std::uint64_t seed) {
    tw::Graph g = tw::Graph::with_nodes(n);
    tw::Rng rng(seed);
    std::vector<std::vector<int>> k_cliques;

    std::vector<int> base;
    for (int u = 1; u <= k + 1 && u <= n; ++u) {
        base.push_back(u);
        for (int v = 1; v < u; ++v) {
            g.add_edge(u, v);
        }
    }
    for (int skip = 0; skip < static_cast<int>(base.size()); ++skip) {
        std::vector<int> clique;
        for (int i = 0; i < static_cast<int>(base.size()); ++i) {
            if (i != skip) {
                clique.push_back(base[i]);
            }
        }
        if (static_cast<int>(clique.size()) == k) {
            k_cliques.push_back(clique);
        }
    }
    for (int u = k + 2; u <= n; ++u) {
        const std::vector<int> host = k_cliques[rng.below(k_cliques.size())];
        for (int v : host) {
            g.add_edge(u, v);
        }
        for (int skip = 0; skip < k; ++skip) {
            std::vector<int> clique = {u};
            for (int i = 0; i < k; ++i) {
                if (i != skip) {
                    clique.push_back(host[i]);
                }
            }
            k_cliques.push_back(clique);
        }
    }
    return g;
}

// Mixed small-graph pool for oracle comparisons: ER at several densities,
// trees, cycles, k-trees.
inline tw::Graph random_small_graph(int max_n, std::uint64_t seed) {
    tw::Rng rng(seed);
    const int n = 2 + static_cast<int>(rng.below(max_n - 1));
    switch (rng.below(6)) {
        case 0:
            return tw::generate_er({n, 0.2, rng.next_u64()});
        case 1:
            return tw::generate_er({n, 0.5, rng.next_u64()});
        case 2:
            return tw::generate_er({n, 0.8, rng.next_u64()});
        case 3:
            return random_tree(n, rng.next_u64());
        case 4:
            return n >= 3 ? cycle_graph(n) : path_graph(n);
        default: {
            const int k = 1 + static_cast<int>(rng.below(3));
            return random_k_tree(n, std::min(k, n - 1), rng.next_u64());
        }
    }
}

// Relabels nodes by a seeded random bijection onto 1..n.
inline std::pair<tw::Graph, std::vector<int>> relabeled(const tw::Graph& g, std::uint64_t seed) {
    std::vector<int> ids = g.nodes();
    std::vector<int> target = ids;
    tw::Rng rng(seed);
    rng.shuffle(target);
    std::vector<int> map_to(ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        map_to[ids[i]] = target[i];
    }
    tw::Graph out;
    for (int u : ids) {
        out.add_node(map_to[u]);
    }
    for (int u : ids) {
        for (int v : g.neighbors(u)) {
            if (u < v) {
                out.add_edge(map_to[u], map_to[v]);
            }
        }
    }
    return {out, map_to};
}

}  // namespace fixtures
