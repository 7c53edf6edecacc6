#include "tw/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tw/env.hpp"

namespace tw {

BestOfK solve_best_of_k(const PolicyNet& net, const Graph& g, int k, std::uint64_t seed) {
    if (k < 1) {
        throw std::invalid_argument("solve_best_of_k: k must be >= 1");
    }
    BestOfK best;
    for (int i = 0; i < k; ++i) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
        EliminationEnv env(g);
        EliminationOrder order;
        while (!env.done()) {
            const ActResult a = act(net, env.current(), ActMode::Sample, rng);
            env.step(a.node);
            order.order.push_back(a.node);
        }
        if (i == 0 || env.running_max() < best.width) {
            best.width = env.running_max();
            best.order = std::move(order);
        }
    }
    return best;
}

std::vector<EntropyStep> entropy_trace(const PolicyNet& net, const Graph& g, std::uint64_t seed) {
    Rng rng(seed);
    EliminationEnv env(g);
    std::vector<EntropyStep> trace;
    int step = 0;
    while (!env.done()) {
        const int remaining = env.current().node_count();
        const ActResult a = act(net, env.current(), ActMode::Sample, rng);
        EntropyStep row;
        row.step = step++;
        row.remaining_nodes = remaining;
        row.normalized_entropy = remaining > 1 ? a.entropy / std::log(static_cast<double>(remaining)) : 0.0;
        trace.push_back(row);
        env.step(a.node);
    }
    return trace;
}

std::string entropy_trace_csv(const std::vector<EntropyStep>& trace) {
    std::ostringstream out;
    out << "step,remaining_nodes,normalized_entropy\n";
    out.precision(17);
    for (const auto& row : trace) {
        out << row.step << ',' << row.remaining_nodes << ',' << row.normalized_entropy << '\n';
    }
    return out.str();
}

std::vector<EntropyStep> parse_entropy_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("entropy trace: empty input");
    }
    std::vector<EntropyStep> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        EntropyStep r;
        char comma;
        std::istringstream ss(line);
        if (!(ss >> r.step >> comma >> r.remaining_nodes >> comma >> r.normalized_entropy)) {
            throw std::runtime_error("entropy trace: malformed row: " + line);
        }
        rows.push_back(r);
    }
    return rows;
}

SolveReport approximation_ratio(const RunTable& runs, const std::string& reference) {
    auto ref_it = runs.find(reference);
    if (ref_it == runs.end()) {
        throw std::invalid_argument("approximation_ratio: no runs for reference '" + reference + "'");
    }
    const auto& ref = ref_it->second;
    for (const auto& [method, table] : runs) {
        if (table.size() != ref.size()) {
            throw std::invalid_argument("approximation_ratio: method '" + method +
                                        "' does not cover the reference graph set");
        }
        for (const auto& [graph, _] : table) {
            if (!ref.count(graph)) {
                throw std::invalid_argument("approximation_ratio: graph '" + graph +
                                            "' missing from the reference");
            }
        }
    }

    SolveReport report;
    report.reference = reference;
    for (const auto& [graph, run] : ref) {
        if (run.width == 0) {
            report.excluded_graphs.push_back(graph);
        } else {
            report.graph_ids.push_back(graph);
        }
    }

    for (const auto& [method, table] : runs) {
        MethodAggregate agg;
        agg.method = method;
        double time_sum = 0.0;
        std::vector<double> ratios;
        for (const std::string& graph : report.graph_ids) {
            const MethodRun& run = table.at(graph);
            const double ratio = static_cast<double>(run.width) / ref.at(graph).width;
            report.ratios[method][graph] = ratio;
            ratios.push_back(ratio);
            time_sum += run.seconds;
        }
        if (!ratios.empty()) {
            const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
            double var = 0.0;
            for (double r : ratios) {
                var += (r - mean) * (r - mean);
            }
            agg.ar_mean = mean;
            agg.ar_std = std::sqrt(var / ratios.size());
            agg.ar_max = *std::max_element(ratios.begin(), ratios.end());
            agg.avg_time_s = time_sum / ratios.size();
            agg.graphs = static_cast<int>(ratios.size());
        }
        report.aggregates.push_back(agg);
    }
    return report;
}

std::string report_csv(const SolveReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "method,approx_ratio,approx_ratio_std,ratio_max,avg_time_s,graphs\n";
    for (const auto& agg : report.aggregates) {
        out << agg.method << ',' << agg.ar_mean << ',' << agg.ar_std << ',' << agg.ar_max << ','
            << agg.avg_time_s << ',' << agg.graphs << '\n';
    }
    return out.str();
}

std::string report_json(const SolveReport& report) {
    nlohmann::json j;
    j["reference"] = report.reference;
    j["graphs"] = report.graph_ids;
    j["excluded_graphs"] = report.excluded_graphs;
    j["ratios"] = report.ratios;
    auto& aggs = j["aggregates"] = nlohmann::json::array();
    for (const auto& agg : report.aggregates) {
        aggs.push_back({{"method", agg.method},
                        {"approx_ratio", agg.ar_mean},
                        {"approx_ratio_std", agg.ar_std},
                        {"ratio_max", agg.ar_max},
                        {"avg_time_s", agg.avg_time_s},
                        {"graphs", agg.graphs}});
    }
    return j.dump(2);
}

}  // namespace tw
