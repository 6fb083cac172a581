#include <benchmark/benchmark.h>

#include "ktmap/fronts.hpp"
#include "ktmap/synth.hpp"

namespace {

ktmap::SyntheticCorpus planted(std::size_t leaf_size) {
    ktmap::PlantedConfig config;
    config.leaf_size = leaf_size;
    config.p_within = {10.0 / static_cast<double>(leaf_size)};
    config.p_between = 0.5 / static_cast<double>(leaf_size);
    return ktmap::gen_planted_kt_network(config, 1);
}

void BM_FastGreedy(benchmark::State& state) {
    const auto corpus = planted(static_cast<std::size_t>(state.range(0)));
    const auto refinement = static_cast<ktmap::Refinement>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(ktmap::fast_greedy(corpus.network.projection(), refinement));
    state.SetComplexityN(static_cast<benchmark::IterationCount>(corpus.network.size()));
}
BENCHMARK(BM_FastGreedy)
    ->ArgsProduct({{50, 100, 250}, {0, 1, 2}})
    ->ArgNames({"leaf", "refine"})
    ->Unit(benchmark::kMillisecond);

void BM_HierarchicalFronts(benchmark::State& state) {
    ktmap::PlantedConfig config;
    config.branching = {3, 3};
    config.leaf_size = static_cast<std::size_t>(state.range(0));
    config.p_within = {0.05, 0.3};
    config.p_between = 0.005;
    const auto corpus = ktmap::gen_planted_kt_network(config, 2);
    ktmap::HierarchyOptions options;
    options.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(ktmap::hierarchical_fronts(corpus.network.projection(), options));
}
BENCHMARK(BM_HierarchicalFronts)->ArgsProduct({{20, 40}, {1, 4}})->ArgNames({"leaf", "threads"})->Unit(benchmark::kMillisecond);

} // namespace
