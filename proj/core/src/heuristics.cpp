#include "tw/heuristics.hpp"

#include <limits>
#include <map>
#include <set>
#include <vector>

#include "tw/rng.hpp"

namespace tw {

namespace {

int pick(const std::vector<int>& candidates, Rng& rng, bool random_ties) {
    if (!random_ties || candidates.size() == 1) {
        return candidates.front();  // candidates are in ascending id order
    }
    return candidates[rng.below(candidates.size())];
}

}  // namespace

EliminationOrder min_degree_order(const Graph& g, std::uint64_t seed, bool random_ties) {
    Graph work = g;
    Rng rng(seed);
    EliminationOrder out;
    out.order.reserve(g.node_count());
    while (!work.empty()) {
        int best = std::numeric_limits<int>::max();
        std::vector<int> candidates;
        for (int u : work.nodes()) {
            const int d = work.degree(u);
            if (d < best) {
                best = d;
                candidates.clear();
            }
            if (d == best) {
                candidates.push_back(u);
            }
        }
        const int u = pick(candidates, rng, random_ties);
        out.order.push_back(u);
        work.eliminate_in_place(u);
    }
    return out;
}

EliminationOrder min_fill_order(const Graph& g, std::uint64_t seed, bool random_ties) {
    Graph work = g;
    Rng rng(seed);
    std::map<int, int> fill;
    for (int u : work.nodes()) {
        fill[u] = fill_in_count(work, u);
    }

    EliminationOrder out;
    out.order.reserve(g.node_count());
    while (!work.empty()) {
        int best = std::numeric_limits<int>::max();
        std::vector<int> candidates;
        for (const auto& [u, f] : fill) {
            if (f < best) {
                best = f;
                candidates.clear();
            }
            if (f == best) {
                candidates.push_back(u);
            }
        }
        const int u = pick(candidates, rng, random_ties);
        out.order.push_back(u);

        const std::set<int> nbrs = work.neighbors(u);
        // Fill edges change scores of their endpoints' common neighbors only.
        std::set<int> dirty = nbrs;
        for (auto a = nbrs.begin(); a != nbrs.end(); ++a) {
            for (auto b = std::next(a); b != nbrs.end(); ++b) {
                if (!work.has_edge(*a, *b)) {
                    for (int w : work.neighbors(*a)) {
                        if (w != u && work.has_edge(w, *b)) {
                            dirty.insert(w);
                        }
                    }
                }
            }
        }
        work.eliminate_in_place(u);
        fill.erase(u);
        for (int v : dirty) {
            fill[v] = fill_in_count(work, v);
        }
    }
    return out;
}

EliminationOrder random_order(const Graph& g, std::uint64_t seed) {
    EliminationOrder out;
    out.order = g.nodes();
    Rng rng(seed);
    rng.shuffle(out.order);
    return out;
}

}  // namespace tw
