#pragma once

#include <limits>

#include "tw/elimination.hpp"
#include "tw/graph.hpp"

namespace tw {

struct ExactResult {
    int width = 0;
    EliminationOrder order;  // witnesses the returned width
    bool proven_optimal = true;
};

// Depth-first search over all elimination orders with shared prefixes.
// Guarded to n <= 10; larger graphs should use exact_treewidth_bnb.
ExactResult exact_treewidth_bruteforce(const Graph& g);

// Branch and bound over partial elimination orders. Memoizes the minimal
// max-degree-so-far per eliminated-vertex set and prunes states dominated by
// a cached value or by the incumbent. The incumbent starts from
// min_fill_order; simplicial vertices are eliminated up front. If the time
// budget runs out, the best order found so far is returned with
// proven_optimal=false.
ExactResult exact_treewidth_bnb(const Graph& g,
                                double time_budget_seconds = std::numeric_limits<double>::infinity());

}  // namespace tw
