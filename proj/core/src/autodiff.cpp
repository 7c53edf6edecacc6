#include "tw/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tw::ad {

namespace {

void check(bool ok, const char* what) {
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

}  // namespace

Var constant(Mat value) {
    auto n = std::make_shared<Node>();
    n->grad = Mat(value.rows, value.cols);
    n->value = std::move(value);
    return n;
}

Var parameter(Mat value) {
    auto n = constant(std::move(value));
    n->requires_grad = true;
    return n;
}

void zero_grad(const Var& v) {
    v->grad.fill(0.0);
}

void zero_grad(const std::vector<Var>& vars) {
    for (const auto& v : vars) {
        zero_grad(v);
    }
}

Var Tape::make(Mat value, bool requires_grad) {
    auto n = std::make_shared<Node>();
    n->grad = Mat(value.rows, value.cols);
    n->value = std::move(value);
    n->requires_grad = requires_grad;
    n->tape = this;
    created_.push_back(n);
    return n;
}

Var Tape::matmul(const Var& a, const Var& b) {
    check(a->value.cols == b->value.rows, "matmul: inner dimensions differ");
    const Mat& A = a->value;
    const Mat& B = b->value;
    Mat out(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int k = 0; k < A.cols; ++k) {
            const double aik = A.at(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (int j = 0; j < B.cols; ++j) {
                out.at(i, j) += aik * B.at(k, j);
            }
        }
    }
    Var r = make(std::move(out), track(a) || track(b));
    if (r->requires_grad) {
        push([a, b, r] {
            const Mat& G = r->grad;
            if (a->requires_grad) {
                for (int i = 0; i < a->value.rows; ++i) {
                    for (int k = 0; k < a->value.cols; ++k) {
                        double s = 0.0;
                        for (int j = 0; j < G.cols; ++j) {
                            s += G.at(i, j) * b->value.at(k, j);
                        }
                        a->grad.at(i, k) += s;
                    }
                }
            }
            if (b->requires_grad) {
                for (int k = 0; k < b->value.rows; ++k) {
                    for (int j = 0; j < b->value.cols; ++j) {
                        double s = 0.0;
                        for (int i = 0; i < a->value.rows; ++i) {
                            s += a->value.at(i, k) * G.at(i, j);
                        }
                        b->grad.at(k, j) += s;
                    }
                }
            }
        });
    }
    return r;
}

Var Tape::add(const Var& a, const Var& b) {
    check(a->value.same_shape(b->value), "add: shapes differ");
    Mat out = a->value;
    for (int i = 0; i < out.size(); ++i) {
        out.a[i] += b->value.a[i];
    }
    Var r = make(std::move(out), track(a) || track(b));
    if (r->requires_grad) {
        push([a, b, r] {
            if (a->requires_grad) {
                for (int i = 0; i < a->grad.size(); ++i) {
                    a->grad.a[i] += r->grad.a[i];
                }
            }
            if (b->requires_grad) {
                for (int i = 0; i < b->grad.size(); ++i) {
                    b->grad.a[i] += r->grad.a[i];
                }
            }
        });
    }
    return r;
}

Var Tape::add_row(const Var& m, const Var& row) {
    check(row->value.rows == 1 && row->value.cols == m->value.cols, "add_row: need 1 x cols row");
    Mat out = m->value;
    for (int i = 0; i < out.rows; ++i) {
        for (int j = 0; j < out.cols; ++j) {
            out.at(i, j) += row->value.at(0, j);
        }
    }
    Var r = make(std::move(out), track(m) || track(row));
    if (r->requires_grad) {
        push([m, row, r] {
            if (m->requires_grad) {
                for (int i = 0; i < m->grad.size(); ++i) {
                    m->grad.a[i] += r->grad.a[i];
                }
            }
            if (row->requires_grad) {
                for (int i = 0; i < r->grad.rows; ++i) {
                    for (int j = 0; j < r->grad.cols; ++j) {
                        row->grad.at(0, j) += r->grad.at(i, j);
                    }
                }
            }
        });
    }
    return r;
}

Var Tape::sub(const Var& a, const Var& b) {
    check(a->value.same_shape(b->value), "sub: shapes differ");
    Mat out = a->value;
    for (int i = 0; i < out.size(); ++i) {
        out.a[i] -= b->value.a[i];
    }
    Var r = make(std::move(out), track(a) || track(b));
    if (r->requires_grad) {
        push([a, b, r] {
            if (a->requires_grad) {
                for (int i = 0; i < a->grad.size(); ++i) {
                    a->grad.a[i] += r->grad.a[i];
                }
            }
            if (b->requires_grad) {
                for (int i = 0; i < b->grad.size(); ++i) {
                    b->grad.a[i] -= r->grad.a[i];
                }
            }
        });
    }
    return r;
}

Var Tape::mul(const Var& a, const Var& b) {
    check(a->value.same_shape(b->value), "mul: shapes differ");
    Mat out = a->value;
    for (int i = 0; i < out.size(); ++i) {
        out.a[i] *= b->value.a[i];
    }
    Var r = make(std::move(out), track(a) || track(b));
    if (r->requires_grad) {
        push([a, b, r] {
            if (a->requires_grad) {
                for (int i = 0; i < a->grad.size(); ++i) {
                    a->grad.a[i] += r->grad.a[i] * b->value.a[i];
                }
            }
            if (b->requires_grad) {
                for (int i = 0; i < b->grad.size(); ++i) {
                    b->grad.a[i] += r->grad.a[i] * a->value.a[i];
                }
            }
        });
    }
    return r;
}

Var Tape::scale(const Var& a, double c) {
    Mat out = a->value;
    for (double& x : out.a) {
        x *= c;
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, c, r] {
            for (int i = 0; i < a->grad.size(); ++i) {
                a->grad.a[i] += c * r->grad.a[i];
            }
        });
    }
    return r;
}

Var Tape::transpose(const Var& a) {
    Mat out(a->value.cols, a->value.rows);
    for (int i = 0; i < a->value.rows; ++i) {
        for (int j = 0; j < a->value.cols; ++j) {
            out.at(j, i) = a->value.at(i, j);
        }
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r] {
            for (int i = 0; i < a->grad.rows; ++i) {
                for (int j = 0; j < a->grad.cols; ++j) {
                    a->grad.at(i, j) += r->grad.at(j, i);
                }
            }
        });
    }
    return r;
}

Var Tape::row_sum(const Var& a) {
    Mat out(a->value.rows, 1);
    for (int i = 0; i < a->value.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a->value.cols; ++j) {
            s += a->value.at(i, j);
        }
        out.at(i, 0) = s;
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r] {
            for (int i = 0; i < a->grad.rows; ++i) {
                for (int j = 0; j < a->grad.cols; ++j) {
                    a->grad.at(i, j) += r->grad.at(i, 0);
                }
            }
        });
    }
    return r;
}

Var Tape::sum_all(const Var& a) {
    double s = 0.0;
    for (double x : a->value.a) {
        s += x;
    }
    Var r = make(Mat::scalar(s), track(a));
    if (r->requires_grad) {
        push([a, r] {
            const double g = r->grad.a[0];
            for (int i = 0; i < a->grad.size(); ++i) {
                a->grad.a[i] += g;
            }
        });
    }
    return r;
}

Var Tape::mean_rows(const Var& a) {
    check(a->value.rows >= 1, "mean_rows: empty input");
    const int m = a->value.rows;
    Mat out(1, a->value.cols);
    for (int j = 0; j < a->value.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            s += a->value.at(i, j);
        }
        out.at(0, j) = s / m;
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r, m] {
            for (int i = 0; i < a->grad.rows; ++i) {
                for (int j = 0; j < a->grad.cols; ++j) {
                    a->grad.at(i, j) += r->grad.at(0, j) / m;
                }
            }
        });
    }
    return r;
}

Var Tape::elu(const Var& a) {
    Mat out = a->value;
    for (double& x : out.a) {
        if (x < 0.0) {
            x = std::expm1(x);
        }
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r] {
            for (int i = 0; i < a->grad.size(); ++i) {
                const double x = a->value.a[i];
                a->grad.a[i] += r->grad.a[i] * (x > 0.0 ? 1.0 : std::exp(x));
            }
        });
    }
    return r;
}

Var Tape::log(const Var& a) {
    Mat out = a->value;
    for (double& x : out.a) {
        x = std::log(x);
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r] {
            for (int i = 0; i < a->grad.size(); ++i) {
                a->grad.a[i] += r->grad.a[i] / a->value.a[i];
            }
        });
    }
    return r;
}

Var Tape::exp(const Var& a) {
    Mat out = a->value;
    for (double& x : out.a) {
        x = std::exp(x);
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r] {
            for (int i = 0; i < a->grad.size(); ++i) {
                a->grad.a[i] += r->grad.a[i] * r->value.a[i];
            }
        });
    }
    return r;
}

namespace {

// Stable masked softmax helper shared by the two masked primitives.
std::vector<double> masked_probs(const Mat& logits, const std::vector<std::uint8_t>& valid) {
    check(logits.cols == 1, "softmax_masked: logits must be n x 1");
    check(static_cast<int>(valid.size()) == logits.rows, "softmax_masked: mask size mismatch");
    double hi = -std::numeric_limits<double>::infinity();
    bool any_valid = false;
    for (int i = 0; i < logits.rows; ++i) {
        if (valid[i]) {
            hi = std::max(hi, logits.at(i, 0));
            any_valid = true;
        }
    }
    check(any_valid, "softmax_masked: all entries masked");
    std::vector<double> p(logits.rows, 0.0);
    double z = 0.0;
    for (int i = 0; i < logits.rows; ++i) {
        if (valid[i]) {
            p[i] = std::exp(logits.at(i, 0) - hi);
            z += p[i];
        }
    }
    for (int i = 0; i < logits.rows; ++i) {
        p[i] /= z;
    }
    return p;
}

}  // namespace

Var Tape::softmax_masked(const Var& logits, const std::vector<std::uint8_t>& valid) {
    std::vector<double> p = masked_probs(logits->value, valid);
    Mat out(logits->value.rows, 1);
    for (int i = 0; i < out.rows; ++i) {
        out.at(i, 0) = p[i];
    }
    Var r = make(std::move(out), track(logits));
    if (r->requires_grad) {
        push([logits, r, valid] {
            double dot = 0.0;
            for (int i = 0; i < r->value.rows; ++i) {
                dot += r->value.at(i, 0) * r->grad.at(i, 0);
            }
            for (int i = 0; i < r->value.rows; ++i) {
                if (valid[i]) {
                    logits->grad.at(i, 0) += r->value.at(i, 0) * (r->grad.at(i, 0) - dot);
                }
            }
        });
    }
    return r;
}

Var Tape::entropy_masked(const Var& logits, const std::vector<std::uint8_t>& valid) {
    std::vector<double> p = masked_probs(logits->value, valid);
    double h = 0.0;
    for (double pi : p) {
        if (pi > 0.0) {
            h -= pi * std::log(pi);
        }
    }
    Var r = make(Mat::scalar(h), track(logits));
    if (r->requires_grad) {
        push([logits, r, p = std::move(p), h] {
            const double g = r->grad.a[0];
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] > 0.0) {
                    logits->grad.at(static_cast<int>(i), 0) -= g * p[i] * (std::log(p[i]) + h);
                }
            }
        });
    }
    return r;
}

Var Tape::gather_rows(const Var& a, std::vector<int> idx) {
    for (int i : idx) {
        check(i >= 0 && i < a->value.rows, "gather_rows: index out of range");
    }
    Mat out(static_cast<int>(idx.size()), a->value.cols);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (int j = 0; j < a->value.cols; ++j) {
            out.at(static_cast<int>(r), j) = a->value.at(idx[r], j);
        }
    }
    Var r = make(std::move(out), track(a));
    if (r->requires_grad) {
        push([a, r, idx = std::move(idx)] {
            for (std::size_t k = 0; k < idx.size(); ++k) {
                for (int j = 0; j < a->grad.cols; ++j) {
                    a->grad.at(idx[k], j) += r->grad.at(static_cast<int>(k), j);
                }
            }
        });
    }
    return r;
}

void Tape::backward(const Var& loss) {
    check(loss->tape == this, "backward: loss was not produced by this tape");
    check(loss->value.rows == 1 && loss->value.cols == 1, "backward: loss must be scalar");
    for (const auto& n : created_) {
        n->grad.fill(0.0);
    }
    loss->grad.a[0] = 1.0;
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
        (*it)();
    }
}

}  // namespace tw::ad
