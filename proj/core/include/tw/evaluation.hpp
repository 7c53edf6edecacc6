#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tw/elimination.hpp"
#include "tw/gcn.hpp"
#include "tw/graph.hpp"

namespace tw {

struct BestOfK {
    EliminationOrder order;
    int width = 0;
};

// Samples k rollouts and keeps the lowest-width order. Rollout i draws from
// the stream derived from (seed, i), so the samples for k=10 extend the
// samples for k=1 and the best width is nonincreasing in k.
BestOfK solve_best_of_k(const PolicyNet& net, const Graph& g, int k, std::uint64_t seed);

// Normalized entropy H(s)/log|U_s| per step of one sampled rollout, recorded
// before each action; the forced last step (one node left) is defined as 0.
struct EntropyStep {
    int step = 0;
    int remaining_nodes = 0;
    double normalized_entropy = 0.0;
};

std::vector<EntropyStep> entropy_trace(const PolicyNet& net, const Graph& g, std::uint64_t seed);
std::string entropy_trace_csv(const std::vector<EntropyStep>& trace);
std::vector<EntropyStep> parse_entropy_trace_csv(const std::string& text);

struct MethodRun {
    int width = 0;
    double seconds = 0.0;
};

// method -> graph id -> run
using RunTable = std::map<std::string, std::map<std::string, MethodRun>>;

struct MethodAggregate {
    std::string method;
    double ar_mean = 0.0;
    double ar_std = 0.0;
    double ar_max = 0.0;
    double avg_time_s = 0.0;
    int graphs = 0;
};

struct SolveReport {
    std::string reference;
    std::vector<std::string> graph_ids;        // included graphs, sorted
    std::vector<std::string> excluded_graphs;  // reference width was 0
    std::map<std::string, std::map<std::string, double>> ratios;
    std::vector<MethodAggregate> aggregates;
};

// Per-graph width ratio against the reference method plus mean/std/max and
// average wall time per method. Graphs where the reference width is 0 are
// excluded and reported. All methods must cover the same graph set.
SolveReport approximation_ratio(const RunTable& runs, const std::string& reference);

std::string report_csv(const SolveReport& report);
std::string report_json(const SolveReport& report);

}  // namespace tw
