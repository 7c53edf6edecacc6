#include "tw/exact.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tw/heuristics.hpp"

namespace tw {

namespace {

constexpr int kBruteforceLimit = 10;

// ---- brute force: n <= 10, adjacency rows as bitmasks -------------------

struct BruteState {
    std::array<std::uint32_t, kBruteforceLimit> adj{};
    int n = 0;
    std::vector<int> labels;
    int best = std::numeric_limits<int>::max();
    std::vector<int> best_order;
    std::vector<int> prefix;
};

void brute_dfs(BruteState& s, std::array<std::uint32_t, kBruteforceLimit> adj,
               std::uint32_t alive, int running) {
    if (alive == 0) {
        if (running < s.best) {
            s.best = running;
            s.best_order = s.prefix;
        }
        return;
    }
    for (int u = 0; u < s.n; ++u) {
        if (!(alive & (1u << u))) {
            continue;
        }
        const std::uint32_t nb = adj[u] & alive;
        const int deg = std::popcount(nb);
        const int next_running = std::max(running, deg);
        if (next_running >= s.best) {
            continue;  // cannot improve on the incumbent
        }
        auto child = adj;
        for (int v = 0; v < s.n; ++v) {
            if (nb & (1u << v)) {
                child[v] = (child[v] | nb) & ~(1u << v);
            }
        }
        s.prefix.push_back(u);
        brute_dfs(s, child, alive & ~(1u << u), next_running);
        s.prefix.pop_back();
    }
}

// ---- branch and bound: arbitrary n, multi-word bitmasks ------------------

using Mask = std::vector<std::uint64_t>;

struct MaskHash {
    std::size_t operator()(const Mask& m) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : m) {
            h ^= w;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

struct BnbState {
    int n = 0;
    int words = 0;
    std::vector<int> labels;
    std::vector<Mask> adj;

    int best = std::numeric_limits<int>::max();
    std::vector<int> best_order;  // dense indices, full length n
    std::vector<int> prefix;

    std::unordered_map<Mask, int, MaskHash> memo;
    std::chrono::steady_clock::time_point deadline;
    bool timed_out = false;
    std::uint64_t ticks = 0;

    bool test(const Mask& m, int i) const { return (m[i >> 6] >> (i & 63)) & 1; }
    static void set_bit(Mask& m, int i) { m[i >> 6] |= 1ULL << (i & 63); }
    static void clear_bit(Mask& m, int i) { m[i >> 6] &= ~(1ULL << (i & 63)); }

    int popcount_and(const Mask& a, const Mask& b) const {
        int c = 0;
        for (int w = 0; w < words; ++w) {
            c += std::popcount(a[w] & b[w]);
        }
        return c;
    }

    bool expired() {
        if (timed_out) {
            return true;
        }
        if ((++ticks & 0xfff) == 0 && std::chrono::steady_clock::now() >= deadline) {
            timed_out = true;
        }
        return timed_out;
    }
};

int masked_degree(const BnbState& s, const std::vector<Mask>& adj, const Mask& alive, int u) {
    return s.popcount_and(adj[u], alive);
}

bool alive_is_clique(const BnbState& s, const std::vector<Mask>& adj, const Mask& alive,
                     const std::vector<int>& alive_nodes) {
    for (int u : alive_nodes) {
        if (masked_degree(s, adj, alive, u) != static_cast<int>(alive_nodes.size()) - 1) {
            return false;
        }
    }
    return true;
}

std::vector<int> nodes_in(const BnbState& s, const Mask& alive) {
    std::vector<int> out;
    for (int u = 0; u < s.n; ++u) {
        if (s.test(alive, u)) {
            out.push_back(u);
        }
    }
    return out;
}

void record_if_better(BnbState& s, int width, const std::vector<int>& completion) {
    if (width < s.best) {
        s.best = width;
        s.best_order = s.prefix;
        s.best_order.insert(s.best_order.end(), completion.begin(), completion.end());
    }
}

void eliminate_dense(BnbState& s, std::vector<Mask>& adj, Mask& alive, int u) {
    Mask nb(s.words);
    for (int w = 0; w < s.words; ++w) {
        nb[w] = adj[u][w] & alive[w];
    }
    BnbState::clear_bit(alive, u);
    for (int v = 0; v < s.n; ++v) {
        if (s.test(nb, v)) {
            for (int w = 0; w < s.words; ++w) {
                adj[v][w] |= nb[w];
            }
            BnbState::clear_bit(adj[v], v);
        }
    }
}

void bnb_dfs(BnbState& s, std::vector<Mask> adj, Mask alive, Mask eliminated, int running) {
    if (s.expired()) {
        return;
    }
    std::vector<int> alive_nodes = nodes_in(s, alive);
    if (alive_nodes.empty()) {
        record_if_better(s, running, {});
        return;
    }
    if (alive_is_clique(s, adj, alive, alive_nodes)) {
        const int width = std::max(running, static_cast<int>(alive_nodes.size()) - 1);
        record_if_better(s, width, alive_nodes);
        return;
    }

    // The next eliminated node contributes its current degree, so the
    // minimum alive degree bounds every completion from here.
    int min_degree = std::numeric_limits<int>::max();
    std::vector<std::pair<int, int>> ranked;  // (degree, node)
    ranked.reserve(alive_nodes.size());
    for (int u : alive_nodes) {
        const int d = masked_degree(s, adj, alive, u);
        min_degree = std::min(min_degree, d);
        ranked.emplace_back(d, u);
    }
    if (std::max(running, min_degree) >= s.best) {
        return;
    }

    auto it = s.memo.find(eliminated);
    if (it != s.memo.end() && it->second <= running) {
        return;  // dominated: same subproblem reached with a better prefix
    }
    if (s.memo.size() < (1u << 22)) {
        s.memo[eliminated] = running;
    } else if (it != s.memo.end()) {
        it->second = running;
    }

    std::sort(ranked.begin(), ranked.end());
    for (const auto& [deg, u] : ranked) {
        const int next_running = std::max(running, deg);
        if (next_running >= s.best) {
            continue;
        }
        auto child_adj = adj;
        auto child_alive = alive;
        eliminate_dense(s, child_adj, child_alive, u);
        BnbState::set_bit(eliminated, u);
        s.prefix.push_back(u);
        bnb_dfs(s, std::move(child_adj), std::move(child_alive), eliminated, next_running);
        s.prefix.pop_back();
        BnbState::clear_bit(eliminated, u);
        if (s.timed_out) {
            return;
        }
    }
}

}  // namespace

ExactResult exact_treewidth_bruteforce(const Graph& g) {
    if (g.node_count() > kBruteforceLimit) {
        throw std::invalid_argument(
            "exact_treewidth_bruteforce: graph has more than " + std::to_string(kBruteforceLimit) +
            " nodes; use exact_treewidth_bnb");
    }
    if (g.empty()) {
        return {0, {}, true};
    }

    BruteState s;
    s.labels = g.nodes();
    s.n = static_cast<int>(s.labels.size());
    for (int i = 0; i < s.n; ++i) {
        for (int j = 0; j < s.n; ++j) {
            if (i != j && g.has_edge(s.labels[i], s.labels[j])) {
                s.adj[i] |= 1u << j;
            }
        }
    }
    brute_dfs(s, s.adj, (1u << s.n) - 1, 0);

    ExactResult result;
    result.width = s.best;
    for (int idx : s.best_order) {
        result.order.order.push_back(s.labels[idx]);
    }
    return result;
}

ExactResult exact_treewidth_bnb(const Graph& g, double time_budget_seconds) {
    if (g.empty()) {
        return {0, {}, true};
    }

    // Incumbent from min-fill; the search can only improve on it.
    EliminationOrder incumbent = min_fill_order(g);
    const int incumbent_width = width_of_order(g, incumbent).first;

    BnbState s;
    s.labels = g.nodes();
    s.n = static_cast<int>(s.labels.size());
    s.words = (s.n + 63) / 64;
    s.adj.assign(s.n, Mask(s.words));
    std::unordered_map<int, int> dense;
    for (int i = 0; i < s.n; ++i) {
        dense[s.labels[i]] = i;
    }
    for (int i = 0; i < s.n; ++i) {
        for (int v : g.neighbors(s.labels[i])) {
            BnbState::set_bit(s.adj[i], dense[v]);
        }
    }
    s.best = incumbent_width;
    s.best_order.clear();
    for (int v : incumbent.order) {
        s.best_order.push_back(dense[v]);
    }
    const auto start = std::chrono::steady_clock::now();
    if (std::isfinite(time_budget_seconds)) {
        s.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                 std::chrono::duration<double>(std::max(0.0, time_budget_seconds)));
    } else {
        s.deadline = std::chrono::steady_clock::time_point::max();
    }

    Mask alive(s.words), eliminated(s.words);
    for (int i = 0; i < s.n; ++i) {
        BnbState::set_bit(alive, i);
    }
    std::vector<Mask> adj = s.adj;
    int running = 0;

    // Simplicial reduction: such a node starts some optimal order, so
    // eliminating it up front loses nothing.
    bool reduced = true;
    while (reduced) {
        reduced = false;
        for (int u = 0; u < s.n && !reduced; ++u) {
            if (!s.test(alive, u)) {
                continue;
            }
            std::vector<int> nbrs;
            for (int v = 0; v < s.n; ++v) {
                if (v != u && s.test(alive, v) && s.test(adj[u], v)) {
                    nbrs.push_back(v);
                }
            }
            bool simplicial = true;
            for (std::size_t a = 0; a < nbrs.size() && simplicial; ++a) {
                for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                    if (!s.test(adj[nbrs[a]], nbrs[b])) {
                        simplicial = false;
                        break;
                    }
                }
            }
            if (simplicial) {
                running = std::max(running, static_cast<int>(nbrs.size()));
                eliminate_dense(s, adj, alive, u);
                BnbState::set_bit(eliminated, u);
                s.prefix.push_back(u);
                reduced = true;
            }
        }
    }

    bool proven = true;
    if (nodes_in(s, alive).empty()) {
        record_if_better(s, running, {});
    } else if (running >= s.best) {
        // The reduction alone already matches the incumbent, which is optimal:
        // width >= running >= incumbent >= width.
    } else if (std::chrono::steady_clock::now() >= s.deadline) {
        proven = false;
    } else {
        bnb_dfs(s, std::move(adj), std::move(alive), eliminated, running);
        proven = !s.timed_out;
    }

    ExactResult result;
    result.width = s.best;
    result.proven_optimal = proven;
    for (int idx : s.best_order) {
        result.order.order.push_back(s.labels[idx]);
    }
    return result;
}

}  // namespace tw
