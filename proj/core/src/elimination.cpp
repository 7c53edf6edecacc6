#include "tw/elimination.hpp"

#include <algorithm>
#include <set>

namespace tw {

bool is_permutation_of(const Graph& g, const EliminationOrder& order) {
    if (static_cast<int>(order.order.size()) != g.node_count()) {
        return false;
    }
    std::set<int> seen;
    for (int u : order.order) {
        if (!g.has_node(u) || !seen.insert(u).second) {
            return false;
        }
    }
    return true;
}

std::pair<int, EliminationTrace> width_of_order(const Graph& g, const EliminationOrder& order) {
    if (!is_permutation_of(g, order)) {
        throw InvalidOrder("width_of_order: order is not a permutation of the graph's nodes");
    }
    Graph work = g;
    EliminationTrace trace;
    trace.steps.reserve(order.order.size());
    int running = 0;
    for (int u : order.order) {
        const int deg = work.degree(u);
        const int fill = work.eliminate_in_place(u);
        running = std::max(running, deg);
        trace.steps.push_back({u, deg, fill, running});
    }
    return {running, std::move(trace)};
}

int fill_in_count(const Graph& g, int u) {
    const std::set<int>& nbrs = g.neighbors(u);
    int missing = 0;
    for (auto a = nbrs.begin(); a != nbrs.end(); ++a) {
        for (auto b = std::next(a); b != nbrs.end(); ++b) {
            if (!g.has_edge(*a, *b)) {
                ++missing;
            }
        }
    }
    return missing;
}

}  // namespace tw
