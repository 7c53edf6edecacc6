#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tw/autodiff.hpp"
#include "tw/graph.hpp"
#include "tw/rng.hpp"

namespace tw {

struct GcnInputs {
    ad::Mat a_norm;             // D^(-1/2) (A + I) D^(-1/2), dense over current nodes
    ad::Mat features;           // n x 1 inverse degrees; isolated nodes get 1.0
    std::vector<int> node_ids;  // row index -> node label, ascending
};

// Dense inputs for the current graph. Node labels are re-indexed in
// ascending order; features are rebuilt from current degrees every call,
// since fill edges change degrees during an episode.
GcnInputs build_inputs(const Graph& g);

// Three GCN layers with ELU, then a weight-shared two-layer head per node
// for action logits and a two-layer head over the mean node embedding for
// the state value.
struct PolicyNet {
    static constexpr int kHidden = 64;
    static constexpr int kGcnLayers = 3;
    static constexpr int kInputDim = 1;

    ad::NamedParams params;  // fixed order established by init()

    static PolicyNet init(std::uint64_t seed);
    std::vector<ad::Var> param_vars() const;
    const ad::Var& p(const std::string& name) const;
};

// Tape-connected forward pass for training.
struct PolicyOut {
    ad::Var logits;  // n x 1, rows follow node_ids
    ad::Var value;   // 1 x 1
    std::vector<int> node_ids;
};
PolicyOut policy_forward(ad::Tape& tape, const PolicyNet& net, const Graph& g);

// Plain-value forward pass for inference.
struct ForwardResult {
    std::vector<int> node_ids;
    std::vector<double> logits;
    double value = 0.0;
};
ForwardResult forward(const PolicyNet& net, const Graph& g);

enum class ActMode { Sample, Greedy };

struct ActResult {
    int node = 0;
    double log_prob = 0.0;
    double value = 0.0;
    double entropy = 0.0;  // of the full action distribution
};

// Chooses a node among the current (non-eliminated) ones. Sample mode draws
// from softmax over the logits; greedy takes the argmax with lowest-id
// tie-breaking.
ActResult act(const PolicyNet& net, const Graph& g, ActMode mode, Rng& rng);

std::vector<double> softmax(const std::vector<double>& logits);
double entropy_of(const std::vector<double>& probs);

// Checkpoint plus a JSON sidecar (<path>.json) describing the architecture
// and the feature definition version.
void save_policy(const std::string& checkpoint_path, const PolicyNet& net);
PolicyNet load_policy(const std::string& checkpoint_path);

}  // namespace tw
