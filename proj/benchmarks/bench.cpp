#include <benchmark/benchmark.h>

#include "ergopt/convexity.hpp"
#include "ergopt/criteria.hpp"
#include "ergopt/lax_oleinik.hpp"
#include "ergopt/sturmian.hpp"

using namespace ergopt;

static void BM_MaxTransfer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const TransferObservable f(cosine(1), n, 2);
  std::vector<double> g(n, 0.0), out(n);
  for (auto _ : state) {
    f.apply(g, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_MaxTransfer)->RangeMultiplier(4)->Range(1024, 65536);

static void BM_SolveCosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  SolverOptions o;
  o.tol = default_tolerance(cosine(1), n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_calibrated(translate(0.3, cosine(1)), n, o).beta);
}
BENCHMARK(BM_SolveCosine)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

static void BM_EtaFiniteDifference(benchmark::State& state) {
  const auto g = sample(cosine(1), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eta(g).eta);
}
BENCHMARK(BM_EtaFiniteDifference)->Arg(512)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_EtaSecondDerivative(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(eta(neg_square_extremal()).eta);
}
BENCHMARK(BM_EtaSecondDerivative);

static void BM_Certificate(benchmark::State& state) {
  const auto s = solve_calibrated(cosine(1), 4096, {});
  const auto r = compute_R(cosine(1), s.g);
  for (auto _ : state)
    benchmark::DoNotOptimize(sturmian_certificate(r, 1e-2, default_w_max(4096)).status);
}
BENCHMARK(BM_Certificate);
BENCHMARK_MAIN();
