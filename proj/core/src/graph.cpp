#include "tw/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "tw/rng.hpp"

namespace tw {

Graph Graph::with_nodes(int n) {
    Graph g;
    for (int i = 1; i <= n; ++i) {
        g.add_node(i);
    }
    return g;
}

void Graph::add_node(int id) {
    adj_.try_emplace(id);
}

bool Graph::add_edge(int u, int v) {
    if (u == v) {
        return false;
    }
    auto iu = adj_.find(u);
    auto iv = adj_.find(v);
    if (iu == adj_.end() || iv == adj_.end()) {
        throw std::invalid_argument("add_edge: endpoint not in graph");
    }
    if (!iu->second.insert(v).second) {
        return false;
    }
    iv->second.insert(u);
    ++edges_;
    return true;
}

bool Graph::has_edge(int u, int v) const {
    auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) != 0;
}

const std::set<int>& Graph::neighbors(int u) const {
    auto it = adj_.find(u);
    if (it == adj_.end()) {
        throw std::invalid_argument("neighbors: node " + std::to_string(u) + " not in graph");
    }
    return it->second;
}

std::vector<int> Graph::nodes() const {
    std::vector<int> out;
    out.reserve(adj_.size());
    for (const auto& [id, _] : adj_) {
        out.push_back(id);
    }
    return out;
}

int Graph::eliminate_in_place(int u) {
    auto it = adj_.find(u);
    if (it == adj_.end()) {
        throw std::invalid_argument("eliminate: node " + std::to_string(u) + " not in graph");
    }
    const std::set<int> nbrs = it->second;
    for (int w : nbrs) {
        adj_[w].erase(u);
        --edges_;
    }
    adj_.erase(it);

    int fill = 0;
    for (auto a = nbrs.begin(); a != nbrs.end(); ++a) {
        for (auto b = std::next(a); b != nbrs.end(); ++b) {
            if (add_edge(*a, *b)) {
                ++fill;
            }
        }
    }
    return fill;
}

bool Graph::is_clique(const std::set<int>& nodes) const {
    for (auto a = nodes.begin(); a != nodes.end(); ++a) {
        for (auto b = std::next(a); b != nodes.end(); ++b) {
            if (!has_edge(*a, *b)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<int>> Graph::connected_components() const {
    std::vector<std::vector<int>> components;
    std::set<int> seen;
    for (const auto& [start, _] : adj_) {
        if (seen.count(start)) {
            continue;
        }
        std::vector<int> comp;
        std::vector<int> stack = {start};
        seen.insert(start);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (int v : adj_.at(u)) {
                if (seen.insert(v).second) {
                    stack.push_back(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

Graph eliminate_node(const Graph& g, int u) {
    Graph out = g;
    out.eliminate_in_place(u);
    return out;
}

double ErConfig::resolved_probability() const {
    if (edge_probability < 0.0) {
        return n > 0 ? std::min(1.0, 5.0 / n) : 1.0;
    }
    return edge_probability;
}

Graph generate_er(const ErConfig& config) {
    if (config.n < 1) {
        throw std::invalid_argument("generate_er: n must be >= 1");
    }
    const double p = config.resolved_probability();
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("generate_er: edge_probability must be in [0, 1]");
    }
    Graph g = Graph::with_nodes(config.n);
    Rng rng(config.seed);
    for (int u = 1; u <= config.n; ++u) {
        for (int v = u + 1; v <= config.n; ++v) {
            if (rng.uniform() < p) {
                g.add_edge(u, v);
            }
        }
    }
    return g;
}

}  // namespace tw
