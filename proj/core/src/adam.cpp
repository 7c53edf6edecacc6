#include "tw/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace tw::ad {

void Adam::step(const std::vector<Var>& params) {
    if (m_.empty()) {
        for (const auto& p : params) {
            m_.emplace_back(p->value.rows, p->value.cols);
            v_.emplace_back(p->value.rows, p->value.cols);
        }
    }
    if (m_.size() != params.size()) {
        throw std::invalid_argument("adam: parameter list changed size");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Node& p = *params[i];
        if (!p.value.same_shape(m_[i])) {
            throw std::invalid_argument("adam: parameter shape changed");
        }
        for (int k = 0; k < p.value.size(); ++k) {
            const double g = p.grad.a[k];
            m_[i].a[k] = cfg_.beta1 * m_[i].a[k] + (1.0 - cfg_.beta1) * g;
            v_[i].a[k] = cfg_.beta2 * v_[i].a[k] + (1.0 - cfg_.beta2) * g * g;
            const double mhat = m_[i].a[k] / bc1;
            const double vhat = v_[i].a[k] / bc2;
            p.value.a[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
        p.grad.fill(0.0);
    }
}

}  // namespace tw::ad
