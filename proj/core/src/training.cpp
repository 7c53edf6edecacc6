#include "tw/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tw/adam.hpp"

namespace tw {

TrainConfig train_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    TrainConfig cfg;
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.gae_lambda = j.value("gae_lambda", cfg.gae_lambda);
    cfg.beta_value = j.value("beta_value", cfg.beta_value);
    cfg.beta_entropy = j.value("beta_entropy", cfg.beta_entropy);
    cfg.lr = j.value("lr", cfg.lr);
    cfg.beta1 = j.value("beta1", cfg.beta1);
    cfg.beta2 = j.value("beta2", cfg.beta2);
    cfg.episodes_per_update = j.value("episodes_per_update", cfg.episodes_per_update);
    cfg.updates_per_epoch = j.value("updates_per_epoch", cfg.updates_per_epoch);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.literal_value_target = j.value("literal_value_target", cfg.literal_value_target);
    cfg.sampled_entropy = j.value("sampled_entropy", cfg.sampled_entropy);
    cfg.normalize_advantages = j.value("normalize_advantages", cfg.normalize_advantages);
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0 || cfg.gae_lambda < 0.0 || cfg.gae_lambda > 1.0) {
        throw std::runtime_error("config: gamma and gae_lambda must be in [0, 1]");
    }
    if (cfg.lr <= 0.0) {
        throw std::runtime_error("config: lr must be positive");
    }
    return cfg;
}

std::string train_config_to_json(const TrainConfig& cfg) {
    nlohmann::json j;
    j["gamma"] = cfg.gamma;
    j["gae_lambda"] = cfg.gae_lambda;
    j["beta_value"] = cfg.beta_value;
    j["beta_entropy"] = cfg.beta_entropy;
    j["lr"] = cfg.lr;
    j["beta1"] = cfg.beta1;
    j["beta2"] = cfg.beta2;
    j["episodes_per_update"] = cfg.episodes_per_update;
    j["updates_per_epoch"] = cfg.updates_per_epoch;
    j["epochs"] = cfg.epochs;
    j["seed"] = cfg.seed;
    j["literal_value_target"] = cfg.literal_value_target;
    j["sampled_entropy"] = cfg.sampled_entropy;
    j["normalize_advantages"] = cfg.normalize_advantages;
    return j.dump(2);
}

double Episode::total_return() const {
    return std::accumulate(rewards.begin(), rewards.end(), 0.0);
}

Episode collect_episode(const PolicyNet& net, const Graph& g, Rng& rng) {
    Episode ep;
    ep.start = g;
    EliminationEnv env(g);
    while (!env.done()) {
        const ActResult a = act(net, env.current(), ActMode::Sample, rng);
        const auto [reward, done] = env.step(a.node);
        ep.actions.push_back(a.node);
        ep.rewards.push_back(reward);
        ep.log_probs.push_back(a.log_prob);
        ep.values.push_back(a.value);
        ep.entropies.push_back(a.entropy);
        (void)done;
    }
    ep.width = env.running_max();
    return ep;
}

std::vector<double> gae(const std::vector<double>& rewards, const std::vector<double>& values,
                        double gamma, double lambda) {
    if (values.size() != rewards.size() + 1) {
        throw std::invalid_argument("gae: need one value per step plus the terminal value");
    }
    std::vector<double> adv(rewards.size(), 0.0);
    double acc = 0.0;
    for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
        const double delta = rewards[t] + gamma * values[t + 1] - values[t];
        acc = delta + gamma * lambda * acc;
        adv[t] = acc;
    }
    return adv;
}

LossVars build_losses(ad::Tape& tape, const PolicyNet& net, const Episode& episode,
                      const std::vector<double>& advantages, const TrainConfig& cfg) {
    if (advantages.size() != episode.actions.size()) {
        throw std::invalid_argument("build_losses: advantages do not align with episode steps");
    }
    ad::Var policy_loss = ad::constant(ad::Mat::scalar(0.0));
    ad::Var value_loss = ad::constant(ad::Mat::scalar(0.0));
    ad::Var entropy_sum = ad::constant(ad::Mat::scalar(0.0));

    Graph state = episode.start;
    for (std::size_t t = 0; t < episode.actions.size(); ++t) {
        PolicyOut out = policy_forward(tape, net, state);

        const auto row = std::find(out.node_ids.begin(), out.node_ids.end(), episode.actions[t]);
        if (row == out.node_ids.end()) {
            throw std::invalid_argument("build_losses: action not present in replayed state");
        }
        const int row_idx = static_cast<int>(row - out.node_ids.begin());
        const std::vector<std::uint8_t> all_valid(out.node_ids.size(), 1);

        ad::Var probs = tape.softmax_masked(out.logits, all_valid);
        ad::Var log_prob = tape.log(tape.gather_rows(probs, {row_idx}));
        policy_loss = tape.add(policy_loss, tape.scale(log_prob, -advantages[t]));

        // Value regression target; constant with respect to the parameters.
        const double target =
            cfg.literal_value_target ? advantages[t] : advantages[t] + episode.values[t];
        ad::Var err = tape.sub(out.value, ad::constant(ad::Mat::scalar(target)));
        value_loss = tape.add(value_loss, tape.mul(err, err));

        if (cfg.sampled_entropy) {
            // -p log p of the chosen action only (the sum exactly as printed).
            ad::Var p_t = tape.gather_rows(probs, {row_idx});
            entropy_sum = tape.sub(entropy_sum, tape.mul(p_t, tape.log(p_t)));
        } else {
            entropy_sum = tape.add(entropy_sum, tape.entropy_masked(out.logits, all_valid));
        }

        state.eliminate_in_place(episode.actions[t]);
    }

    LossVars out;
    out.policy = policy_loss;
    out.value = value_loss;
    out.entropy = entropy_sum;
    out.total = tape.sub(tape.add(policy_loss, tape.scale(value_loss, cfg.beta_value)),
                         tape.scale(entropy_sum, cfg.beta_entropy));
    return out;
}

LossBreakdown losses(const PolicyNet& net, const Episode& episode,
                     const std::vector<double>& advantages, const TrainConfig& cfg) {
    ad::Tape tape(/*record=*/false);
    LossVars v = build_losses(tape, net, episode, advantages, cfg);
    return {ad::scalar_of(v.policy), ad::scalar_of(v.value), ad::scalar_of(v.entropy),
            ad::scalar_of(v.total)};
}

std::string training_log_csv(const std::vector<UpdateLogRow>& rows) {
    std::ostringstream out;
    out << "update_idx,mean_width,mean_return,policy_loss,value_loss,entropy,wall_ms\n";
    out.precision(17);
    for (const auto& r : rows) {
        out << r.update_idx << ',' << r.mean_width << ',' << r.mean_return << ',' << r.policy_loss
            << ',' << r.value_loss << ',' << r.entropy << ',' << r.wall_ms << '\n';
    }
    return out.str();
}

std::vector<UpdateLogRow> parse_training_log_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("training log: empty input");
    }
    std::vector<UpdateLogRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        UpdateLogRow r;
        char comma;
        std::istringstream ss(line);
        if (!(ss >> r.update_idx >> comma >> r.mean_width >> comma >> r.mean_return >> comma >>
              r.policy_loss >> comma >> r.value_loss >> comma >> r.entropy >> comma >> r.wall_ms)) {
            throw std::runtime_error("training log: malformed row: " + line);
        }
        rows.push_back(r);
    }
    return rows;
}

namespace {

TrainResult run_training(PolicyNet net, const GraphSource& source, const TrainConfig& cfg) {
    ad::Adam adam({cfg.lr, cfg.beta1, cfg.beta2, 1e-8});
    const std::vector<ad::Var> params = net.param_vars();
    ad::zero_grad(params);

    TrainResult result;
    const int total_updates = cfg.updates();
    for (int update = 0; update < total_updates; ++update) {
        const auto started = std::chrono::steady_clock::now();
        Graph g = source(update);

        std::vector<Episode> episodes;
        episodes.reserve(cfg.episodes_per_update);
        for (int e = 0; e < cfg.episodes_per_update; ++e) {
            Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(update) * cfg.episodes_per_update + e));
            episodes.push_back(collect_episode(net, g, rng));
        }

        ad::Tape tape;
        ad::Var total = ad::constant(ad::Mat::scalar(0.0));
        LossBreakdown sums;
        double width_sum = 0.0, return_sum = 0.0, entropy_steps = 0.0;
        for (const Episode& ep : episodes) {
            std::vector<double> values = ep.values;
            values.push_back(0.0);  // terminal state is worth 0
            std::vector<double> adv = gae(ep.rewards, values, cfg.gamma, cfg.gae_lambda);
            if (cfg.normalize_advantages && adv.size() > 1) {
                double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / adv.size();
                double var = 0.0;
                for (double a : adv) {
                    var += (a - mean) * (a - mean);
                }
                const double sd = std::sqrt(var / adv.size()) + 1e-8;
                for (double& a : adv) {
                    a = (a - mean) / sd;
                }
            }
            LossVars lv = build_losses(tape, net, ep, adv, cfg);
            total = tape.add(total, lv.total);
            sums.policy += ad::scalar_of(lv.policy);
            sums.value += ad::scalar_of(lv.value);
            sums.entropy += ad::scalar_of(lv.entropy);
            width_sum += ep.width;
            return_sum += ep.total_return();
            entropy_steps += static_cast<double>(ep.actions.size());
        }
        total = tape.scale(total, 1.0 / cfg.episodes_per_update);
        tape.backward(total);
        adam.step(params);

        const auto elapsed = std::chrono::steady_clock::now() - started;
        UpdateLogRow row;
        row.update_idx = update;
        row.mean_width = width_sum / cfg.episodes_per_update;
        row.mean_return = return_sum / cfg.episodes_per_update;
        row.policy_loss = sums.policy / cfg.episodes_per_update;
        row.value_loss = sums.value / cfg.episodes_per_update;
        row.entropy = entropy_steps > 0 ? sums.entropy / entropy_steps : 0.0;
        row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        result.log.push_back(row);
    }
    result.net = std::move(net);
    return result;
}

}  // namespace

TrainResult train(const Graph& g, const TrainConfig& cfg) {
    return train([&g](int) { return g; }, cfg);
}

TrainResult train(const GraphSource& source, const TrainConfig& cfg) {
    return run_training(PolicyNet::init(cfg.seed), source, cfg);
}

TrainResult train_from(PolicyNet net, const GraphSource& source, const TrainConfig& cfg) {
    return run_training(std::move(net), source, cfg);
}

}  // namespace tw
