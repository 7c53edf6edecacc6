// twsolve: treewidth solving via elimination orders. Subcommands cover ER
// instance generation, solving with exact/greedy/learned methods, policy
// training, batch evaluation with approximation ratios, and entropy traces.
//
// Exit codes: 0 success, 1 usage error, 2 input parse error,
// 3 branch-and-bound budget exceeded without an optimality proof.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tw/elimination.hpp"
#include "tw/evaluation.hpp"
#include "tw/exact.hpp"
#include "tw/gcn.hpp"
#include "tw/gr_io.hpp"
#include "tw/graph.hpp"
#include "tw/heuristics.hpp"
#include "tw/training.hpp"
#include "tw/tree_decomposition.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

tw::Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return tw::parse_gr(in);
    } catch (const tw::ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

tw::PolicyNet load_checkpoint_or_die(const std::string& path) {
    try {
        return tw::load_policy(path);
    } catch (const std::exception& e) {
        throw InputError(std::string("checkpoint: ") + e.what());
    }
}

const std::set<std::string> kMethods = {"exact", "bnb",    "min-degree",
                                        "min-fill", "random", "agent"};

bool method_is_stochastic(const std::string& m) {
    return m == "random" || m == "agent";
}

struct SolveOutcome {
    int width = 0;
    tw::EliminationOrder order;
    double seconds = 0.0;
    bool proven = true;  // only bnb can clear this
};

SolveOutcome run_method(const std::string& method, const tw::Graph& g, std::uint64_t seed, int k,
                        double budget, const tw::PolicyNet* net) {
    SolveOutcome out;
    const auto start = Clock::now();
    if (method == "exact") {
        const tw::ExactResult r = tw::exact_treewidth_bruteforce(g);
        out.width = r.width;
        out.order = r.order;
    } else if (method == "bnb") {
        const tw::ExactResult r = tw::exact_treewidth_bnb(g, budget);
        out.width = r.width;
        out.order = r.order;
        out.proven = r.proven_optimal;
    } else if (method == "min-degree") {
        out.order = tw::min_degree_order(g);
        out.width = tw::width_of_order(g, out.order).first;
    } else if (method == "min-fill") {
        out.order = tw::min_fill_order(g);
        out.width = tw::width_of_order(g, out.order).first;
    } else if (method == "random") {
        out.order = tw::random_order(g, seed);
        out.width = tw::width_of_order(g, out.order).first;
    } else if (method == "agent") {
        const tw::BestOfK best = tw::solve_best_of_k(*net, g, k, seed);
        out.order = best.order;
        out.width = best.width;
    } else {
        throw UsageError("unknown method '" + method + "'");
    }
    out.seconds = seconds_since(start);
    return out;
}

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
    int n = 0;
    double p = -1.0;
    int count = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool sweep = false;
};

int cmd_generate(const GenerateArgs& args) {
    fs::create_directories(args.out_dir);
    std::vector<std::pair<int, double>> plan;
    if (args.sweep) {
        // 100 graphs spanning 10..1000 nodes at the 5/n default density.
        for (int i = 0; i < 100; ++i) {
            plan.emplace_back(10 + i * 10, -1.0);
        }
    } else {
        if (args.n < 1) {
            throw UsageError("--n is required (or use --sweep)");
        }
        for (int i = 0; i < args.count; ++i) {
            plan.emplace_back(args.n, args.p);
        }
    }
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto [n, p] = plan[i];
        tw::ErConfig cfg{n, p, tw::Rng::derive(args.seed, i)};
        const tw::Graph g = tw::generate_er(cfg);
        char name[128];
        std::snprintf(name, sizeof(name), "er_n%04d_s%llu_%03zu.gr", n,
                      static_cast<unsigned long long>(args.seed), i);
        const fs::path path = fs::path(args.out_dir) / name;
        std::ofstream out(path);
        if (!out) {
            throw InputError("cannot write " + path.string());
        }
        out << "c erdos-renyi n=" << n << " p=" << cfg.resolved_probability() << " seed=" << cfg.seed
            << '\n'
            << tw::write_gr(g);
        std::cout << path.string() << " n=" << n << " m=" << g.edge_count() << '\n';
    }
    return kExitOk;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
    std::vector<std::string> inputs;
    std::string method = "min-fill";
    int k = 10;
    std::string checkpoint;
    std::optional<std::uint64_t> seed;
    double budget = 30.0;
    std::string td_out;  // "-" for stdout
};

int cmd_solve(const SolveArgs& args) {
    if (method_is_stochastic(args.method) && !args.seed) {
        throw UsageError("--seed is required for method '" + args.method + "'");
    }
    if (args.method == "agent" && args.checkpoint.empty()) {
        throw UsageError("method 'agent' requires --checkpoint");
    }
    if (!args.td_out.empty() && args.td_out != "-" && args.inputs.size() > 1) {
        throw UsageError("--td with a file path works on a single input graph");
    }
    std::optional<tw::PolicyNet> net;
    if (args.method == "agent") {
        net = load_checkpoint_or_die(args.checkpoint);
    }

    bool all_proven = true;
    for (std::size_t i = 0; i < args.inputs.size(); ++i) {
        const tw::Graph g = load_graph(args.inputs[i]);
        const std::uint64_t seed = tw::Rng::derive(args.seed.value_or(0), i);
        const SolveOutcome out =
            run_method(args.method, g, seed, args.k, args.budget, net ? &*net : nullptr);
        all_proven = all_proven && out.proven;

        std::ostream& report = args.td_out == "-" ? std::cerr : std::cout;
        report << args.inputs[i] << " method=" << args.method << " width=" << out.width
               << " time_s=" << out.seconds;
        if (args.method == "bnb") {
            report << " proven=" << (out.proven ? "yes" : "no");
        }
        report << '\n';

        if (!args.td_out.empty()) {
            const tw::TreeDecomposition td = tw::td_from_order(g, out.order);
            if (args.td_out == "-") {
                std::cout << tw::write_td_solution(td, g.node_count());
            } else {
                std::ofstream td_file(args.td_out);
                if (!td_file) {
                    throw InputError("cannot write " + args.td_out);
                }
                td_file << tw::write_td_solution(td, g.node_count());
            }
        }
    }
    return all_proven ? kExitOk : kExitBudget;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    std::string graph_path;
    int er_n = 0;
    double er_p = -1.0;
    bool er_resample = false;
    std::string config_path;
    std::string out_checkpoint = "policy.ckpt";
    std::string log_path;
    std::string resume;
    // CLI overrides; only applied when the user passed the flag.
    std::optional<double> lr, gamma, lambda, beta_value, beta_entropy;
    std::optional<int> epochs, updates_per_epoch, episodes_per_update;
    std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainArgs& args) {
    tw::TrainConfig cfg;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) {
            throw InputError("cannot open " + args.config_path);
        }
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        try {
            cfg = tw::train_config_from_json(text);
        } catch (const std::exception& e) {
            throw InputError(std::string("config: ") + e.what());
        }
    }
    if (args.lr) cfg.lr = *args.lr;
    if (args.gamma) cfg.gamma = *args.gamma;
    if (args.lambda) cfg.gae_lambda = *args.lambda;
    if (args.beta_value) cfg.beta_value = *args.beta_value;
    if (args.beta_entropy) cfg.beta_entropy = *args.beta_entropy;
    if (args.epochs) cfg.epochs = *args.epochs;
    if (args.updates_per_epoch) cfg.updates_per_epoch = *args.updates_per_epoch;
    if (args.episodes_per_update) cfg.episodes_per_update = *args.episodes_per_update;
    if (args.seed) cfg.seed = *args.seed;

    tw::GraphSource source;
    if (!args.graph_path.empty()) {
        const tw::Graph g = load_graph(args.graph_path);
        source = [g](int) { return g; };
    } else if (args.er_n >= 1) {
        const std::uint64_t graph_seed = tw::Rng::derive(cfg.seed, 0x67726170);  // "grap"
        const int n = args.er_n;
        const double p = args.er_p;
        if (args.er_resample) {
            source = [n, p, graph_seed](int update) {
                return tw::generate_er({n, p, tw::Rng::derive(graph_seed, update)});
            };
        } else {
            const tw::Graph g = tw::generate_er({n, p, graph_seed});
            source = [g](int) { return g; };
        }
    } else {
        throw UsageError("provide --graph FILE or --er-n N");
    }

    tw::TrainResult result;
    if (!args.resume.empty()) {
        tw::PolicyNet net = load_checkpoint_or_die(args.resume);
        result = tw::train_from(std::move(net), source, cfg);
    } else {
        result = tw::train(source, cfg);
    }

    tw::save_policy(args.out_checkpoint, result.net);
    std::cerr << "checkpoint written to " << args.out_checkpoint << '\n';
    if (!args.log_path.empty()) {
        std::ofstream log(args.log_path);
        if (!log) {
            throw InputError("cannot write " + args.log_path);
        }
        log << tw::training_log_csv(result.log);
    }
    if (!result.log.empty()) {
        const auto& last = result.log.back();
        std::cout << "updates=" << result.log.size() << " final_mean_width=" << last.mean_width
                  << " final_mean_return=" << last.mean_return << '\n';
    }
    return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string dir;
    std::vector<std::string> methods;
    std::string reference = "exact";
    std::string checkpoint;
    std::optional<std::uint64_t> seed;
    int k = 10;
    double budget = 30.0;
    std::string out = "report";
    int jobs = 1;
};

int cmd_eval(const EvalArgs& args) {
    std::vector<fs::path> files;
    if (!fs::is_directory(args.dir)) {
        throw InputError(args.dir + " is not a directory");
    }
    for (const auto& entry : fs::directory_iterator(args.dir)) {
        if (entry.path().extension() == ".gr") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw InputError("no .gr files in " + args.dir);
    }
    std::vector<std::string> methods = args.methods;
    if (methods.empty()) {
        throw UsageError("--methods is required");
    }
    if (std::find(methods.begin(), methods.end(), args.reference) == methods.end()) {
        methods.push_back(args.reference);
    }
    bool any_stochastic = false;
    for (const auto& m : methods) {
        if (!kMethods.count(m)) {
            throw UsageError("unknown method '" + m + "'");
        }
        any_stochastic = any_stochastic || method_is_stochastic(m);
    }
    if (any_stochastic && !args.seed) {
        throw UsageError("--seed is required when methods include 'random' or 'agent'");
    }
    std::optional<tw::PolicyNet> net;
    if (std::find(methods.begin(), methods.end(), "agent") != methods.end()) {
        if (args.checkpoint.empty()) {
            throw UsageError("method 'agent' requires --checkpoint");
        }
        net = load_checkpoint_or_die(args.checkpoint);
    }

    struct GraphJob {
        std::string id;
        tw::Graph graph;
    };
    std::vector<GraphJob> jobs;
    for (const auto& f : files) {
        jobs.push_back({f.stem().string(), load_graph(f.string())});
    }

    tw::RunTable runs;
    bool all_proven = true;
    for (const auto& method : methods) {
        std::vector<std::future<std::pair<SolveOutcome, std::string>>> futures;
        std::vector<std::pair<SolveOutcome, std::string>> outcomes(jobs.size());
        const int workers = std::max(1, args.jobs);
        for (std::size_t begin = 0; begin < jobs.size(); begin += workers) {
            const std::size_t end = std::min(jobs.size(), begin + workers);
            futures.clear();
            for (std::size_t i = begin; i < end; ++i) {
                futures.push_back(std::async(std::launch::async, [&, i] {
                    const std::uint64_t seed = tw::Rng::derive(args.seed.value_or(0), i);
                    return std::make_pair(run_method(method, jobs[i].graph, seed, args.k,
                                                     args.budget, net ? &*net : nullptr),
                                          jobs[i].id);
                }));
            }
            for (std::size_t i = begin; i < end; ++i) {
                outcomes[i] = futures[i - begin].get();
            }
        }
        for (const auto& [outcome, id] : outcomes) {
            runs[method][id] = {outcome.width, outcome.seconds};
            if (!outcome.proven) {
                all_proven = false;
                std::cerr << "warning: bnb budget expired on " << id << " (width unproven)\n";
            }
        }
    }

    const tw::SolveReport report = tw::approximation_ratio(runs, args.reference);
    std::ofstream csv(args.out + ".csv");
    std::ofstream json(args.out + ".json");
    if (!csv || !json) {
        throw InputError("cannot write report files at prefix " + args.out);
    }
    csv << tw::report_csv(report);
    json << tw::report_json(report);
    std::cout << tw::report_csv(report);
    for (const auto& g : report.excluded_graphs) {
        std::cerr << "excluded (reference width 0): " << g << '\n';
    }
    return all_proven ? kExitOk : kExitBudget;
}

// ---- entropy --------------------------------------------------------------

struct EntropyArgs {
    std::string checkpoint;
    std::string graph_path;
    std::uint64_t seed = 0;
    std::string out;  // empty -> stdout
};

int cmd_entropy(const EntropyArgs& args) {
    const tw::PolicyNet net = load_checkpoint_or_die(args.checkpoint);
    const tw::Graph g = load_graph(args.graph_path);
    const auto trace = tw::entropy_trace(net, g, args.seed);
    const std::string csv = tw::entropy_trace_csv(trace);
    if (args.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(args.out);
        if (!out) {
            throw InputError("cannot write " + args.out);
        }
        out << csv;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"treewidth solving via elimination orders"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write Erdos-Renyi instances as .gr files");
    generate->add_option("--n", gen.n, "node count");
    generate->add_option("--p", gen.p, "edge probability (default 5/n)");
    generate->add_option("--count", gen.count, "number of graphs")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "base RNG seed")->required();
    generate->add_option("--out-dir", gen.out_dir, "output directory")->required();
    generate->add_flag("--sweep", gen.sweep, "write 100 graphs with 10..1000 nodes at p=5/n");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "compute an elimination order and its width");
    solve_cmd->add_option("inputs", solve.inputs, ".gr files")->required();
    solve_cmd->add_option("--method", solve.method, "exact|bnb|min-degree|min-fill|random|agent")
        ->check(CLI::IsMember(kMethods));
    solve_cmd->add_option("--k", solve.k, "samples per graph for method=agent")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--checkpoint", solve.checkpoint, "policy checkpoint for method=agent");
    solve_cmd->add_option("--seed", solve.seed, "RNG seed (required for random/agent)");
    solve_cmd->add_option("--budget", solve.budget, "bnb time budget in seconds");
    solve_cmd->add_option("--td", solve.td_out, "write the tree decomposition here ('-' = stdout)");

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "train the policy with actor-critic");
    train_cmd->add_option("--graph", train.graph_path, "fixed training graph (.gr)");
    train_cmd->add_option("--er-n", train.er_n, "train on a generated ER graph with this size");
    train_cmd->add_option("--er-p", train.er_p, "ER edge probability (default 5/n)");
    train_cmd->add_flag("--er-resample", train.er_resample, "fresh ER graph every update");
    train_cmd->add_option("--config", train.config_path, "JSON config file");
    train_cmd->add_option("--out", train.out_checkpoint, "checkpoint output path");
    train_cmd->add_option("--log", train.log_path, "training log CSV path");
    train_cmd->add_option("--resume", train.resume, "continue from this checkpoint");
    train_cmd->add_option("--lr", train.lr, "learning rate override");
    train_cmd->add_option("--gamma", train.gamma, "discount override");
    train_cmd->add_option("--lambda", train.lambda, "GAE weight override");
    train_cmd->add_option("--beta-value", train.beta_value, "value loss weight override");
    train_cmd->add_option("--beta-entropy", train.beta_entropy, "entropy weight override");
    train_cmd->add_option("--epochs", train.epochs, "epoch count override");
    train_cmd->add_option("--updates-per-epoch", train.updates_per_epoch, "updates per epoch");
    train_cmd->add_option("--episodes-per-update", train.episodes_per_update,
                          "episodes per update");
    train_cmd->add_option("--seed", train.seed, "training seed (overrides config)");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "compare methods over a directory of graphs");
    eval_cmd->add_option("--dir", eval.dir, "directory of .gr files")->required();
    eval_cmd->add_option("--methods", eval.methods, "comma-separated method list")
        ->delimiter(',')
        ->required();
    eval_cmd->add_option("--reference", eval.reference, "AR reference method (default exact)");
    eval_cmd->add_option("--checkpoint", eval.checkpoint, "policy checkpoint for agent");
    eval_cmd->add_option("--seed", eval.seed, "RNG seed (required for random/agent)");
    eval_cmd->add_option("--k", eval.k, "samples per graph for agent")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--budget", eval.budget, "bnb time budget in seconds");
    eval_cmd->add_option("--out", eval.out, "report path prefix (.csv/.json appended)");
    eval_cmd->add_option("--jobs", eval.jobs, "parallel workers across graphs")
        ->check(CLI::PositiveNumber);

    EntropyArgs entropy;
    auto* entropy_cmd = app.add_subcommand("entropy", "normalized entropy trace of one rollout");
    entropy_cmd->add_option("--checkpoint", entropy.checkpoint, "policy checkpoint")->required();
    entropy_cmd->add_option("--graph", entropy.graph_path, "input .gr file")->required();
    entropy_cmd->add_option("--seed", entropy.seed, "RNG seed")->required();
    entropy_cmd->add_option("--out", entropy.out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen);
        }
        if (solve_cmd->parsed()) {
            return cmd_solve(solve);
        }
        if (train_cmd->parsed()) {
            return cmd_train(train);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval);
        }
        if (entropy_cmd->parsed()) {
            return cmd_entropy(entropy);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const tw::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
