#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tw::ad {

// Dense row-major matrix of doubles. Vectors are n x 1 or 1 x n.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    static Mat scalar(double v) {
        Mat m(1, 1);
        m.a[0] = v;
        return m;
    }

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
    int size() const { return rows * cols; }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
    void fill(double v) { std::fill(a.begin(), a.end(), v); }
};

// One value in the computation graph. Parameters are leaves whose grads
// accumulate across backward passes; interior nodes belong to a tape.
struct Node {
    Mat value;
    Mat grad;
    bool requires_grad = false;
    const void* tape = nullptr;  // owning tape for interior nodes
};
using Var = std::shared_ptr<Node>;

Var constant(Mat value);
Var parameter(Mat value);
inline double scalar_of(const Var& v) { return v->value.a[0]; }

// Records primitive ops in execution order; backward() replays them in
// reverse, which is a reverse topological visit of the graph. A tape and the
// tensors it created belong to one thread at a time.
class Tape {
public:
    // record=false skips closure recording for inference-only forwards.
    explicit Tape(bool record = true) : record_(record) {}

    Var matmul(const Var& a, const Var& b);
    Var add(const Var& a, const Var& b);
    Var add_row(const Var& m, const Var& row);  // (m x n) + (1 x n), row broadcast
    Var sub(const Var& a, const Var& b);
    Var mul(const Var& a, const Var& b);  // elementwise
    Var scale(const Var& a, double c);
    Var transpose(const Var& a);
    Var row_sum(const Var& a);    // m x n -> m x 1
    Var sum_all(const Var& a);    // m x n -> 1 x 1
    Var mean_rows(const Var& a);  // m x n -> 1 x n
    Var elu(const Var& a);        // alpha = 1
    Var log(const Var& a);
    Var exp(const Var& a);

    // Probabilities over the valid entries of an n x 1 logit vector; masked
    // entries get exactly 0 and the valid ones sum to 1. Throws when every
    // entry is masked.
    Var softmax_masked(const Var& logits, const std::vector<std::uint8_t>& valid);
    // -sum p log p over valid entries of softmax_masked(logits), as a scalar,
    // with the p -> 0 limit handled (0 log 0 = 0).
    Var entropy_masked(const Var& logits, const std::vector<std::uint8_t>& valid);

    Var gather_rows(const Var& a, std::vector<int> idx);

    // Seeds d(loss)/d(loss) = 1 and runs the recorded closures in reverse.
    // Interior grads are cleared first, so calling backward again accumulates
    // another full pass into the leaf grads.
    void backward(const Var& loss);

private:
    Var make(Mat value, bool requires_grad);
    void push(std::function<void()> fn) {
        if (record_) {
            ops_.push_back(std::move(fn));
        }
    }
    bool track(const Var& a) const { return record_ && a->requires_grad; }

    bool record_ = true;
    std::vector<std::function<void()>> ops_;
    std::vector<Var> created_;
};

using NamedParams = std::vector<std::pair<std::string, Var>>;

void zero_grad(const Var& v);
void zero_grad(const std::vector<Var>& vars);

}  // namespace tw::ad
