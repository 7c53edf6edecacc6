#include "tw/tree_decomposition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "tw/gr_io.hpp"

namespace tw {

namespace {

bool is_subset(const std::set<int>& a, const std::set<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[a] = b;
        return true;
    }
};

}  // namespace

TreeDecomposition td_from_order(const Graph& g, const EliminationOrder& order) {
    if (!is_permutation_of(g, order)) {
        throw InvalidOrder("td_from_order: order is not a permutation of the graph's nodes");
    }
    TreeDecomposition td;
    Graph work = g;
    std::vector<int> leaf_bags;  // indices into td.bags, insertion order

    for (int u : order.order) {
        std::set<int> bag = work.neighbors(u);
        bag.insert(u);
        work.eliminate_in_place(u);

        // First leaf bag that already contains the new bag absorbs it.
        int bag_idx = -1;
        for (int l : leaf_bags) {
            if (is_subset(bag, td.bags[l])) {
                bag_idx = l;
                break;
            }
        }
        if (bag_idx < 0) {
            bag_idx = static_cast<int>(td.bags.size());
            td.bags.push_back(bag);
        }

        // Leaf bags holding u can never intersect a later bag in u, so they
        // attach to u's bag now.
        std::vector<int> still_leaf;
        for (int l : leaf_bags) {
            if (l != bag_idx && td.bags[l].count(u)) {
                td.tree_edges.emplace_back(l, bag_idx);
            } else {
                still_leaf.push_back(l);
            }
        }
        leaf_bags = std::move(still_leaf);
        if (std::find(leaf_bags.begin(), leaf_bags.end(), bag_idx) == leaf_bags.end()) {
            leaf_bags.push_back(bag_idx);
        }
    }

    // A disconnected input leaves one root bag per component; chain them.
    if (td.bags.size() > 1) {
        UnionFind uf(static_cast<int>(td.bags.size()));
        for (const auto& [a, b] : td.tree_edges) {
            uf.unite(a, b);
        }
        int prev_root = -1;
        for (int i = 0; i < static_cast<int>(td.bags.size()); ++i) {
            if (uf.find(i) != i) {
                continue;
            }
            if (prev_root >= 0) {
                td.tree_edges.emplace_back(prev_root, i);
            }
            prev_root = i;
        }
    }
    return td;
}

TdValidation validate_td(const Graph& g, const TreeDecomposition& td) {
    TdValidation report;

    std::set<int> covered;
    for (const auto& bag : td.bags) {
        covered.insert(bag.begin(), bag.end());
    }
    for (int u : g.nodes()) {
        if (!covered.count(u)) {
            report.nodes_covered = false;
            report.missing_nodes.push_back(u);
        }
    }

    for (int u : g.nodes()) {
        for (int v : g.neighbors(u)) {
            if (u >= v) {
                continue;
            }
            bool found = false;
            for (const auto& bag : td.bags) {
                if (bag.count(u) && bag.count(v)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                report.edges_covered = false;
                report.uncovered_edges.emplace_back(u, v);
            }
        }
    }

    // Condition 3: walk the tree restricted to bags containing u.
    const int nbags = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> adj(nbags);
    for (const auto& [a, b] : td.tree_edges) {
        if (a < 0 || a >= nbags || b < 0 || b >= nbags) {
            throw std::invalid_argument("validate_td: tree edge references a missing bag");
        }
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (int u : g.nodes()) {
        std::vector<int> holding;
        for (int i = 0; i < nbags; ++i) {
            if (td.bags[i].count(u)) {
                holding.push_back(i);
            }
        }
        if (holding.size() <= 1) {
            continue;
        }
        std::set<int> target(holding.begin(), holding.end());
        std::set<int> seen = {holding[0]};
        std::vector<int> stack = {holding[0]};
        while (!stack.empty()) {
            int b = stack.back();
            stack.pop_back();
            for (int nb : adj[b]) {
                if (target.count(nb) && seen.insert(nb).second) {
                    stack.push_back(nb);
                }
            }
        }
        if (seen.size() != target.size()) {
            report.subtrees_connected = false;
            report.disconnected_nodes.push_back(u);
        }
    }
    return report;
}

std::string TdValidation::summary() const {
    std::ostringstream out;
    if (all_passed()) {
        return "valid tree decomposition";
    }
    if (!nodes_covered) {
        out << "uncovered nodes:";
        for (int u : missing_nodes) {
            out << ' ' << u;
        }
        out << "; ";
    }
    if (!edges_covered) {
        out << "uncovered edges:";
        for (const auto& [u, v] : uncovered_edges) {
            out << " (" << u << ',' << v << ')';
        }
        out << "; ";
    }
    if (!subtrees_connected) {
        out << "disconnected for nodes:";
        for (int u : disconnected_nodes) {
            out << ' ' << u;
        }
    }
    return out.str();
}

int width_of_td(const TreeDecomposition& td) {
    if (td.bags.empty()) {
        throw std::invalid_argument("width_of_td: empty decomposition");
    }
    std::size_t max_bag = 0;
    for (const auto& bag : td.bags) {
        max_bag = std::max(max_bag, bag.size());
    }
    return static_cast<int>(max_bag) - 1;
}

std::string write_td_solution(const TreeDecomposition& td, int graph_node_count) {
    std::size_t max_bag = 0;
    for (const auto& bag : td.bags) {
        max_bag = std::max(max_bag, bag.size());
    }
    std::ostringstream out;
    out << "s td " << td.bags.size() << ' ' << max_bag << ' ' << graph_node_count << '\n';
    for (std::size_t i = 0; i < td.bags.size(); ++i) {
        out << "b " << (i + 1);
        for (int v : td.bags[i]) {
            out << ' ' << v;
        }
        out << '\n';
    }
    for (const auto& [a, b] : td.tree_edges) {
        out << (a + 1) << ' ' << (b + 1) << '\n';
    }
    return out.str();
}

TreeDecomposition parse_td_solution(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::size_t nbags = 0;
    TreeDecomposition td;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first) || first == "c") {
            continue;
        }
        if (first == "s") {
            std::string kind;
            std::size_t max_bag = 0;
            int n = 0;
            if (have_header || !(ss >> kind >> nbags >> max_bag >> n) || kind != "td") {
                throw ParseError(line_no, "malformed 's td' header");
            }
            have_header = true;
            td.bags.resize(nbags);
            continue;
        }
        if (!have_header) {
            throw ParseError(line_no, "missing 's td' header");
        }
        if (first == "b") {
            std::size_t id = 0;
            if (!(ss >> id) || id < 1 || id > nbags) {
                throw ParseError(line_no, "bad bag id");
            }
            int v;
            while (ss >> v) {
                td.bags[id - 1].insert(v);
            }
            continue;
        }
        std::size_t a = 0, b = 0;
        std::istringstream edge(line);
        if (!(edge >> a >> b) || a < 1 || a > nbags || b < 1 || b > nbags) {
            throw ParseError(line_no, "bad tree edge");
        }
        td.tree_edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 's td' header");
    }
    return td;
}

}  // namespace tw
