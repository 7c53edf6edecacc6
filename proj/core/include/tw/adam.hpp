#pragma once

#include <cstdint>
#include <vector>

#include "tw/autodiff.hpp"

namespace tw::ad {

struct AdamConfig {
    double lr = 0.008;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction. step() consumes and zeroes the parameter grads.
// Moment buffers are keyed by position, so the parameter list must keep a
// fixed order across calls.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    void step(const std::vector<Var>& params);

    std::int64_t steps_taken() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::int64_t t_ = 0;
    std::vector<Mat> m_, v_;
};

}  // namespace tw::ad
