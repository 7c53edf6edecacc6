#include <benchmark/benchmark.h>

#include "tw/elimination.hpp"
#include "tw/env.hpp"
#include "tw/exact.hpp"
#include "tw/gcn.hpp"
#include "tw/graph.hpp"
#include "tw/heuristics.hpp"
#include "tw/tree_decomposition.hpp"

namespace {

tw::Graph er(int n, std::uint64_t seed) {
    return tw::generate_er({n, -1.0, seed});
}

void BM_GenerateEr(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(er(n, seed++));
    }
}
BENCHMARK(BM_GenerateEr)->Arg(100)->Arg(1000);

void BM_WidthOfOrder(benchmark::State& state) {
    const tw::Graph g = er(static_cast<int>(state.range(0)), 1);
    const tw::EliminationOrder pi = tw::random_order(g, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::width_of_order(g, pi));
    }
}
BENCHMARK(BM_WidthOfOrder)->Arg(50)->Arg(200);

void BM_MinDegree(benchmark::State& state) {
    const tw::Graph g = er(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::min_degree_order(g));
    }
}
BENCHMARK(BM_MinDegree)->Arg(50)->Arg(200);

void BM_MinFill(benchmark::State& state) {
    const tw::Graph g = er(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::min_fill_order(g));
    }
}
BENCHMARK(BM_MinFill)->Arg(50)->Arg(200);

void BM_TdFromOrder(benchmark::State& state) {
    const tw::Graph g = er(static_cast<int>(state.range(0)), 5);
    const tw::EliminationOrder pi = tw::min_degree_order(g);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::td_from_order(g, pi));
    }
}
BENCHMARK(BM_TdFromOrder)->Arg(50)->Arg(200);

void BM_ExactBnb(benchmark::State& state) {
    const tw::Graph g = er(static_cast<int>(state.range(0)), 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::exact_treewidth_bnb(g));
    }
}
BENCHMARK(BM_ExactBnb)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_PolicyForward(benchmark::State& state) {
    const tw::PolicyNet net = tw::PolicyNet::init(1);
    const tw::Graph g = er(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tw::forward(net, g));
    }
}
BENCHMARK(BM_PolicyForward)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_AgentEpisode(benchmark::State& state) {
    const tw::PolicyNet net = tw::PolicyNet::init(1);
    const tw::Graph g = er(static_cast<int>(state.range(0)), 8);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        tw::Rng rng(seed++);
        tw::EliminationEnv env(g);
        while (!env.done()) {
            env.step(tw::act(net, env.current(), tw::ActMode::Sample, rng).node);
        }
        benchmark::DoNotOptimize(env.running_max());
    }
}
BENCHMARK(BM_AgentEpisode)->Arg(30)->Arg(70)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
