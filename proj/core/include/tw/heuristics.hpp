#pragma once

#include <cstdint>

#include "tw/elimination.hpp"
#include "tw/graph.hpp"

namespace tw {

// Greedy order builders. Ties are broken by lowest node id so fixtures stay
// reproducible; pass random_ties=true for seed-driven uniform tie-breaking.

// Eliminates a node of minimum current degree at every step.
EliminationOrder min_degree_order(const Graph& g, std::uint64_t seed = 0, bool random_ties = false);

// Eliminates a node whose elimination adds the fewest fill edges. Fill
// counts are maintained incrementally: only nodes whose neighborhood or
// neighborhood-adjacency changed are rescored.
EliminationOrder min_fill_order(const Graph& g, std::uint64_t seed = 0, bool random_ties = false);

// Uniformly random permutation of the nodes.
EliminationOrder random_order(const Graph& g, std::uint64_t seed);

}  // namespace tw
