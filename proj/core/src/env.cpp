#include "tw/env.hpp"

#include <algorithm>
#include <cmath>

namespace tw {

std::pair<double, bool> EliminationEnv::step(int u) {
    const int deg = current_.degree(u);  // throws if u absent
    c_ = std::max(c_, deg);
    current_.eliminate_in_place(u);
    ++t_;
    const bool done = current_.empty();
    // c can be 0 while only isolated nodes have been eliminated; clamp inside
    // the log only, the terminal branch stays exact.
    const double reward = done ? -static_cast<double>(c_) : -std::log(static_cast<double>(std::max(c_, 1)));
    return {reward, done};
}

}  // namespace tw
