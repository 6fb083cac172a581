#include <benchmark/benchmark.h>

#include <vector>

#include "ktmap/random.hpp"
#include "ktmap/selection.hpp"

namespace {

std::vector<std::uint64_t> sample(std::size_t n, std::uint64_t seed) {
    const ktmap::PowerLawSampler sampler(2.5, 1);
    ktmap::Rng rng(seed);
    std::vector<std::uint64_t> values(n);
    for (auto& v : values) v = sampler(rng);
    return values;
}

void BM_FitPowerLaw(benchmark::State& state) {
    const auto values = sample(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(ktmap::fit_power_law(values));
}
BENCHMARK(BM_FitPowerLaw)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
    const auto values = sample(2000, 2);
    const ktmap::PowerLawOptions options{20, 7, static_cast<unsigned>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(ktmap::fit_power_law(values, options));
}
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(4)->ArgName("threads")->Unit(benchmark::kMillisecond);

} // namespace
