#include "tw/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "tw/checkpoint.hpp"

namespace tw {

namespace {

constexpr const char* kFeatureVersion = "inverse-degree/v1";

ad::Mat glorot(int rows, int cols, Rng& rng) {
    ad::Mat m(rows, cols);
    const double limit = std::sqrt(6.0 / (rows + cols));
    for (double& x : m.a) {
        x = (2.0 * rng.uniform() - 1.0) * limit;
    }
    return m;
}

}  // namespace

GcnInputs build_inputs(const Graph& g) {
    if (g.empty()) {
        throw std::invalid_argument("build_inputs: empty graph");
    }
    GcnInputs in;
    in.node_ids = g.nodes();
    const int n = static_cast<int>(in.node_ids.size());

    ad::Mat a_tilde(n, n);
    for (int i = 0; i < n; ++i) {
        a_tilde.at(i, i) = 1.0;
    }
    for (int i = 0; i < n; ++i) {
        const auto& nbrs = g.neighbors(in.node_ids[i]);
        for (int j = i + 1; j < n; ++j) {
            if (nbrs.count(in.node_ids[j])) {
                a_tilde.at(i, j) = 1.0;
                a_tilde.at(j, i) = 1.0;
            }
        }
    }
    // D from row sums of A+I; every node has the self-loop, so D_ii >= 1.
    std::vector<double> dinv_sqrt(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            s += a_tilde.at(i, j);
        }
        dinv_sqrt[i] = 1.0 / std::sqrt(s);
    }
    in.a_norm = ad::Mat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            in.a_norm.at(i, j) = dinv_sqrt[i] * a_tilde.at(i, j) * dinv_sqrt[j];
        }
    }

    in.features = ad::Mat(n, 1);
    for (int i = 0; i < n; ++i) {
        const int deg = g.degree(in.node_ids[i]);
        in.features.at(i, 0) = deg > 0 ? 1.0 / deg : 1.0;
    }
    return in;
}

PolicyNet PolicyNet::init(std::uint64_t seed) {
    Rng rng(seed);
    PolicyNet net;
    auto add = [&net](const std::string& name, ad::Mat m) {
        net.params.emplace_back(name, ad::parameter(std::move(m)));
    };
    add("gcn.w0", glorot(kInputDim, kHidden, rng));
    add("gcn.w1", glorot(kHidden, kHidden, rng));
    add("gcn.w2", glorot(kHidden, kHidden, rng));
    add("policy.w1", glorot(kHidden, kHidden, rng));
    add("policy.b1", ad::Mat(1, kHidden));
    add("policy.w2", glorot(kHidden, 1, rng));
    add("policy.b2", ad::Mat(1, 1));
    add("value.w1", glorot(kHidden, kHidden, rng));
    add("value.b1", ad::Mat(1, kHidden));
    add("value.w2", glorot(kHidden, 1, rng));
    add("value.b2", ad::Mat(1, 1));
    return net;
}

std::vector<ad::Var> PolicyNet::param_vars() const {
    std::vector<ad::Var> out;
    out.reserve(params.size());
    for (const auto& [_, v] : params) {
        out.push_back(v);
    }
    return out;
}

const ad::Var& PolicyNet::p(const std::string& name) const {
    for (const auto& [n, v] : params) {
        if (n == name) {
            return v;
        }
    }
    throw std::invalid_argument("PolicyNet: no parameter named " + name);
}

PolicyOut policy_forward(ad::Tape& tape, const PolicyNet& net, const Graph& g) {
    GcnInputs in = build_inputs(g);
    ad::Var a_norm = ad::constant(std::move(in.a_norm));
    ad::Var h = ad::constant(std::move(in.features));

    h = tape.elu(tape.matmul(a_norm, tape.matmul(h, net.p("gcn.w0"))));
    h = tape.elu(tape.matmul(a_norm, tape.matmul(h, net.p("gcn.w1"))));
    h = tape.elu(tape.matmul(a_norm, tape.matmul(h, net.p("gcn.w2"))));

    ad::Var ph = tape.elu(tape.add_row(tape.matmul(h, net.p("policy.w1")), net.p("policy.b1")));
    ad::Var logits = tape.add_row(tape.matmul(ph, net.p("policy.w2")), net.p("policy.b2"));

    ad::Var pooled = tape.mean_rows(h);
    ad::Var vh = tape.elu(tape.add_row(tape.matmul(pooled, net.p("value.w1")), net.p("value.b1")));
    ad::Var value = tape.add_row(tape.matmul(vh, net.p("value.w2")), net.p("value.b2"));

    return {std::move(logits), std::move(value), std::move(in.node_ids)};
}

ForwardResult forward(const PolicyNet& net, const Graph& g) {
    ad::Tape tape(/*record=*/false);
    PolicyOut out = policy_forward(tape, net, g);
    ForwardResult r;
    r.node_ids = out.node_ids;
    r.logits.resize(out.logits->value.rows);
    for (int i = 0; i < out.logits->value.rows; ++i) {
        r.logits[i] = out.logits->value.at(i, 0);
    }
    r.value = ad::scalar_of(out.value);
    return r;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double hi = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double z = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - hi);
        z += p[i];
    }
    for (double& x : p) {
        x /= z;
    }
    return p;
}

double entropy_of(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    return h;
}

ActResult act(const PolicyNet& net, const Graph& g, ActMode mode, Rng& rng) {
    ForwardResult fwd = forward(net, g);
    const std::vector<double> probs = softmax(fwd.logits);

    std::size_t pick = 0;
    if (mode == ActMode::Sample) {
        const double u = rng.uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            pick = i;
            if (u < acc) {
                break;
            }
        }
    } else {
        for (std::size_t i = 1; i < probs.size(); ++i) {
            if (fwd.logits[i] > fwd.logits[pick]) {
                pick = i;  // ties keep the lowest node id
            }
        }
    }

    ActResult r;
    r.node = fwd.node_ids[pick];
    r.log_prob = std::log(probs[pick]);
    r.value = fwd.value;
    r.entropy = entropy_of(probs);
    return r;
}

void save_policy(const std::string& checkpoint_path, const PolicyNet& net) {
    ad::save_checkpoint(checkpoint_path, net.params);
    nlohmann::json side;
    side["format"] = "twsolve-policy";
    side["feature_version"] = kFeatureVersion;
    side["input_dim"] = PolicyNet::kInputDim;
    side["hidden"] = PolicyNet::kHidden;
    side["gcn_layers"] = PolicyNet::kGcnLayers;
    side["head_layers"] = 2;
    std::ofstream out(checkpoint_path + ".json");
    if (!out) {
        throw std::runtime_error("cannot write " + checkpoint_path + ".json");
    }
    out << side.dump(2) << '\n';
}

PolicyNet load_policy(const std::string& checkpoint_path) {
    PolicyNet net = PolicyNet::init(0);
    ad::load_checkpoint_into(checkpoint_path, net.params);
    std::ifstream side_in(checkpoint_path + ".json");
    if (side_in) {
        nlohmann::json side = nlohmann::json::parse(side_in);
        if (side.value("feature_version", kFeatureVersion) != std::string(kFeatureVersion) ||
            side.value("hidden", PolicyNet::kHidden) != PolicyNet::kHidden ||
            side.value("gcn_layers", PolicyNet::kGcnLayers) != PolicyNet::kGcnLayers) {
            throw std::runtime_error("policy sidecar does not match this build: " + checkpoint_path);
        }
    }
    return net;
}

}  // namespace tw
