#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "tw/graph.hpp"

namespace tw {

struct EliminationOrder {
    std::vector<int> order;  // order[t] is the node eliminated at step t
};

struct InvalidOrder : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Per-step record of one elimination run. running_max is nondecreasing and
// its final value is the width of the order.
struct EliminationTrace {
    struct Step {
        int node;
        int degree;       // degree at elimination time, before removal
        int fill_edges;   // edges added to make N(node) a clique
        int running_max;
    };
    std::vector<Step> steps;
    int width() const { return steps.empty() ? 0 : steps.back().running_max; }
};

bool is_permutation_of(const Graph& g, const EliminationOrder& order);

// Width of an elimination order: the maximum degree any node has at the
// moment it is eliminated (the last node contributes 0). Equals the
// treewidth of g when the order is optimal. Throws InvalidOrder if order is
// not a permutation of g's nodes. The empty graph has width 0.
std::pair<int, EliminationTrace> width_of_order(const Graph& g, const EliminationOrder& order);

// Number of non-adjacent pairs in N(u): the edges eliminating u would add.
int fill_in_count(const Graph& g, int u);

}  // namespace tw
