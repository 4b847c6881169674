#include <benchmark/benchmark.h>

#include <vector>

#include "brwlab/law.hpp"
#include "brwlab/limit_models.hpp"
#include "brwlab/observables.hpp"
#include "brwlab/overlap.hpp"
#include "brwlab/simulate.hpp"
#include "brwlab/stats.hpp"

using namespace brwlab;

namespace {

Population exact(int n, std::uint64_t seed) {
  SimulationRequest req;
  req.n = n;
  req.seed = seed;
  req.mode = SimulationMode::exact;
  return simulate(GaussianBinaryLaw{}, req);
}

}  // namespace

static void BM_SimulateExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(exact(n, ++seed).size());
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_SimulateExact)->Arg(10)->Arg(14)->Arg(18)->Unit(benchmark::kMillisecond);

static void BM_SimulatePruned(benchmark::State& state) {
  const GaussianBinaryLaw law;
  SimulationRequest req;
  req.n = static_cast<int>(state.range(0));
  req.mode = SimulationMode::pruned;
  req.barrier = BarrierSpec{15.0, 17.0, 8.0, 2.0};
  std::size_t particles = 0;
  for (auto _ : state) {
    ++req.seed;
    const auto pop = simulate(law, req);
    particles += pop.size();
  }
  state.counters["frontier"] = benchmark::Counter(static_cast<double>(particles), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SimulatePruned)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_OverlapMeasure(benchmark::State& state) {
  const auto pop = exact(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(overlap_measure(pop, 2.0).mass.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pop.size()));
}
BENCHMARK(BM_OverlapMeasure)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

static void BM_DerivativeMartingale(benchmark::State& state) {
  const auto pop = exact(16, 8);
  for (auto _ : state) benchmark::DoNotOptimize(derivative_martingale(pop));
}
BENCHMARK(BM_DerivativeMartingale)->Unit(benchmark::kMicrosecond);

static void BM_DecorationWindow(benchmark::State& state) {
  const auto pop = exact(16, 9);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(decoration_window(pop, k).size());
}
BENCHMARK(BM_DecorationWindow)->Arg(1)->Arg(8)->Unit(benchmark::kMicrosecond);

static void BM_PdOverlap(benchmark::State& state) {
  const double alpha = 1.0 / static_cast<double>(state.range(0));
  StreamRng rng(11);
  for (auto _ : state) benchmark::DoNotOptimize(sample_pd_overlap(alpha, 1e-8, rng).value);
}
BENCHMARK(BM_PdOverlap)->Arg(2)->Arg(4);

static void BM_BetaVariate(benchmark::State& state) {
  StreamRng rng(12);
  for (auto _ : state) benchmark::DoNotOptimize(beta_variate(0.5, 3.0, rng));
}
BENCHMARK(BM_BetaVariate);

static void BM_Sdppp(benchmark::State& state) {
  SdpppSpec spec;
  spec.window_top = 2.0;
  StreamRng base(13);
  std::uint64_t i = 0;
  for (auto _ : state) {
    StreamRng rng = base.split(++i);
    benchmark::DoNotOptimize(sample_sdppp(spec, rng).size());
  }
}
BENCHMARK(BM_Sdppp);

static void BM_KsTwoSample(benchmark::State& state) {
  StreamRng rng(14);
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  for (auto& x : a) x = rng.uniform();
  for (auto& x : b) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(a, b).p_value);
}
BENCHMARK(BM_KsTwoSample)->Arg(500)->Arg(100000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
