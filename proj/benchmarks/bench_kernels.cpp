#include "dispersim/evolution.hpp"
#include "dispersim/gauge.hpp"
#include "dispersim/initial_data.hpp"
#include "dispersim/nonlinear.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace dispersim;

Grid2D square(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  return make_grid(n, n, 2 * std::numbers::pi, 2 * std::numbers::pi);
}

SpectralField sample_field(const Grid2D &g) {
  auto u = random_bandlimited(g, g.n1() / 4 - 1, 1, 2.0);
  u *= 0.1;
  return u;
}

void BM_Fft2dRoundTrip(benchmark::State &state) {
  const auto u = sample_field(square(state)).to_physical();
  for (auto _ : state) benchmark::DoNotOptimize(u.to_spectral().to_physical());
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_Fft2dRoundTrip)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNLogN);

void BM_DealiasedCube(benchmark::State &state) {
  const auto u = sample_field(square(state));
  const auto ub = u.conj();
  for (auto _ : state) benchmark::DoNotOptimize(dealiased_product({u, ub, u}));
}
BENCHMARK(BM_DealiasedCube)->RangeMultiplier(2)->Range(32, 256);

void BM_Rhs(benchmark::State &state) {
  const auto u = sample_field(square(state));
  const auto c = preset("dysthe").coefficients;
  for (auto _ : state) benchmark::DoNotOptimize(rhs(u, c));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(2)->Range(32, 256);

void BM_PicardStep(benchmark::State &state) {
  const auto g = square(state);
  const auto u = sample_field(g);
  const auto cfg = RunConfig::from_preset(preset("dysthe"));
  const DuhamelStepper stepper(g, cfg, 1e-3);
  int iterations = 0;
  for (auto _ : state) {
    const auto r = stepper.step(u);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.field);
  }
  state.counters["picard_iters"] = iterations;
}
BENCHMARK(BM_PicardStep)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

void BM_GaugeApply(benchmark::State &state) {
  const auto g = square(state);
  const auto model = preset("dysthe");
  const auto sg = snapshot_gauge(sample_field(g), model.coefficients, default_sigma(3.5));
  const auto K = build_gauge(g, sg.Phi, sg.Phi, model.symbol, 8.0);
  const auto v = sample_field(g);
  for (auto _ : state) benchmark::DoNotOptimize(K.apply(v));
}
BENCHMARK(BM_GaugeApply)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_GaugeBuild(benchmark::State &state) {
  const auto g = square(state);
  const auto model = preset("dysthe");
  const auto sg = snapshot_gauge(sample_field(g), model.coefficients, default_sigma(3.5));
  for (auto _ : state) benchmark::DoNotOptimize(build_gauge(g, sg.Phi, sg.Phi, model.symbol, 8.0));
}
BENCHMARK(BM_GaugeBuild)->Arg(16)->Arg(32)->Arg(48)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
