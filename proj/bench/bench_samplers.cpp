#include <benchmark/benchmark.h>

#include "evospec/dequant.hpp"
#include "evospec/mc_sampler.hpp"
#include "evospec/quantum_sim.hpp"

using namespace evospec;

namespace {

ExecPolicy policy_of(const benchmark::State& st) { return st.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial; }

void BM_PathSampler(benchmark::State& st) {
    const auto sh = shift_terms(build_tfim(7, 1.0, 4.0));
    const auto state = phi_optimal(7);
    const PathSampler sampler(sh.base, make_plan(sh.base, 0.9, 100, 1, TimeMode::ImaginaryTime));
    const std::size_t count = 20000;
    std::uint64_t seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(sampler.sample_values(*state, count, seed++, 0, policy_of(st)));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * count));
}

void BM_Bernoulli(benchmark::State& st) {
    const std::size_t count = 1'000'000;
    std::uint64_t seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(bernoulli_count(0.37, count, seed++, 0, policy_of(st)));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * count));
}

void BM_Dequant(benchmark::State& st) {
    const auto rh = rescale_into_half_band(build_tfim(7, 1.0, 4.0));
    const auto state = phi_optimal(7);
    DequantConfig cfg;
    cfg.num_samples = 2000;
    cfg.policy = policy_of(st);
    for (auto _ : st) {
        benchmark::DoNotOptimize(dequant_samples(*state, rh, 4, cfg));
        ++cfg.seed;
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * cfg.num_samples));
}

}  // namespace

// Argument 0 runs the serial reference kernel, 1 the OpenMP kernel.
BENCHMARK(BM_PathSampler)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bernoulli)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dequant)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
