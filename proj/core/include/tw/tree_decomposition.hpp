#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tw/elimination.hpp"
#include "tw/graph.hpp"

namespace tw {

// Tree of bags. tree_edges are pairs of indices into bags and form a tree
// whenever the decomposition has more than one bag.
struct TreeDecomposition {
    std::vector<std::set<int>> bags;
    std::vector<std::pair<int, int>> tree_edges;
};

// Builds a tree decomposition by running the elimination procedure for
// `order` and collecting each node's closed neighborhood as a bag. Bags that
// are subsets of an existing leaf bag are merged into it; a bag containing a
// just-eliminated node attaches to that node's bag, so parents emerge later
// in the sequence than their children. A node isolated at elimination time
// still yields a singleton bag. Disconnected inputs produce one sub-tree per
// component, joined by arbitrary edges into a single tree.
TreeDecomposition td_from_order(const Graph& g, const EliminationOrder& order);

struct TdValidation {
    bool nodes_covered = true;       // every node of g is in some bag
    bool edges_covered = true;       // every edge of g is inside some bag
    bool subtrees_connected = true;  // bags holding a given node induce a connected subtree
    std::vector<int> missing_nodes;
    std::vector<std::pair<int, int>> uncovered_edges;
    std::vector<int> disconnected_nodes;

    bool all_passed() const { return nodes_covered && edges_covered && subtrees_connected; }
    std::string summary() const;
};

// Checks the three decomposition conditions and reports witnesses for each
// failure instead of throwing.
TdValidation validate_td(const Graph& g, const TreeDecomposition& td);

// Max bag size minus one. Throws on an empty decomposition.
int width_of_td(const TreeDecomposition& td);

// PACE solution format: 's td <num_bags> <max_bag_size> <n>', 'b <id> <v...>'
// lines, then tree edges as pairs of 1-based bag ids.
std::string write_td_solution(const TreeDecomposition& td, int graph_node_count);
TreeDecomposition parse_td_solution(const std::string& text);

}  // namespace tw
