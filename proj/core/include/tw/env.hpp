#pragma once

#include <utility>

#include "tw/graph.hpp"

namespace tw {

// Elimination MDP: the state is the shrinking graph, actions are the
// remaining nodes, and c tracks the running maximum degree-at-elimination.
// Rewards are -log(max(c, 1)) per step and -c on the terminal step, so the
// magnitude of the final reward is the width of the realized order.
class EliminationEnv {
public:
    explicit EliminationEnv(Graph g) : original_(std::move(g)), current_(original_) {}

    const Graph& current() const { return current_; }
    const Graph& original() const { return original_; }
    int running_max() const { return c_; }
    int steps_taken() const { return t_; }
    bool done() const { return current_.empty(); }

    // Returns (reward, done). Throws if u is not in the current graph.
    std::pair<double, bool> step(int u);

    void reset() {
        current_ = original_;
        c_ = 0;
        t_ = 0;
    }

private:
    Graph original_;
    Graph current_;
    int c_ = 0;
    int t_ = 0;
};

}  // namespace tw
