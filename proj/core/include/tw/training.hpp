#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tw/autodiff.hpp"
#include "tw/env.hpp"
#include "tw/gcn.hpp"
#include "tw/graph.hpp"

namespace tw {

struct TrainConfig {
    double gamma = 0.999;
    double gae_lambda = 0.85;
    double beta_value = 1.0;
    double beta_entropy = 0.001;
    double lr = 0.008;
    double beta1 = 0.9;
    double beta2 = 0.999;
    int episodes_per_update = 8;
    int updates_per_epoch = 25;
    int epochs = 10;
    std::uint64_t seed = 0;

    // Value target is advantage + V(s) (regression toward the GAE return).
    // literal_value_target regresses V toward the raw advantage instead,
    // which is the loss exactly as printed; kept for comparison.
    bool literal_value_target = false;
    // Entropy bonus uses the full per-state distribution entropy. The
    // as-printed sum runs over the chosen actions only; kept for comparison.
    bool sampled_entropy = false;
    bool normalize_advantages = false;

    int updates() const { return epochs * updates_per_epoch; }
};

// JSON object with any subset of the config keys; missing keys keep their
// defaults. Throws ParseError-style runtime_error on malformed input.
TrainConfig train_config_from_json(const std::string& text);
std::string train_config_to_json(const TrainConfig& cfg);

// One elimination trajectory. States are reconstructed from the start graph
// and the action sequence when the episode is replayed for the gradient pass.
struct Episode {
    Graph start;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> log_probs;
    std::vector<double> values;
    std::vector<double> entropies;
    int width = 0;

    double total_return() const;  // undiscounted reward sum
};

Episode collect_episode(const PolicyNet& net, const Graph& g, Rng& rng);

// Generalized advantage estimation by the standard backward recursion.
// values must have rewards.size() + 1 entries with the terminal value last
// (0 for complete episodes).
std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double gamma, double lambda);

struct LossBreakdown {
    double policy = 0.0;
    double value = 0.0;
    double entropy = 0.0;
    double total = 0.0;
};

struct LossVars {
    ad::Var policy;
    ad::Var value;
    ad::Var entropy;
    ad::Var total;
};

// Replays an episode on the tape and assembles
//   total = policy + beta_value * value - beta_entropy * entropy
// with the advantages treated as constants.
LossVars build_losses(ad::Tape& tape, const PolicyNet& net, const Episode& episode,
                      const std::vector<double>& advantages, const TrainConfig& cfg);

// Numeric loss values without touching gradients.
LossBreakdown losses(const PolicyNet& net, const Episode& episode,
                     const std::vector<double>& advantages, const TrainConfig& cfg);

struct UpdateLogRow {
    int update_idx = 0;
    double mean_width = 0.0;
    double mean_return = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    long long wall_ms = 0;
};

std::string training_log_csv(const std::vector<UpdateLogRow>& rows);
std::vector<UpdateLogRow> parse_training_log_csv(const std::string& text);

// Supplies the training graph for each update; a fixed graph is the paper's
// single-graph regime, a generator gives the multi-graph regime.
using GraphSource = std::function<Graph(int update_idx)>;

struct TrainResult {
    PolicyNet net;
    std::vector<UpdateLogRow> log;
};

TrainResult train(const Graph& g, const TrainConfig& cfg);
TrainResult train(const GraphSource& source, const TrainConfig& cfg);
// Continues from existing weights (e.g. a loaded checkpoint).
TrainResult train_from(PolicyNet net, const GraphSource& source, const TrainConfig& cfg);

}  // namespace tw
