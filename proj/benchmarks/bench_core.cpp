#include <benchmark/benchmark.h>

#include "sslab/convergence_lab.hpp"
#include "sslab/matrix_functions.hpp"

using namespace sslab;

namespace {

SpectralModel surrogate(int k, int N) {
  ModelConfig cfg;
  cfg.k = k;
  cfg.N = N;
  cfg.eigenvalue_law.kind = EigenvalueLaw::Kind::LogSpaced;
  cfg.amplitude_law.kind = AmplitudeLaw::Kind::LogShell;
  return build_model(cfg);
}

FamilySpec targets(int k) {
  FamilySpec f;
  f.g_targets = {-1.0, 0.2, 0.1};
  f.g_targets.resize(static_cast<size_t>(k));
  return f;
}

void BM_Expm(benchmark::State& state) {
  const SpectralModel model = surrogate(2, static_cast<int>(state.range(0)));
  const ApproxSpace space(make_family(model, targets(2), 64), model);
  for (auto _ : state) benchmark::DoNotOptimize(schrodinger_propagator(space.generator(), 1.0));
}
BENCHMARK(BM_Expm)->Arg(32)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ClosedFormResolvent(benchmark::State& state) {
  const PontryaginSpace space(surrogate(3, static_cast<int>(state.range(0))), targets(3).g_targets);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_exact(space, 1.0));
}
BENCHMARK(BM_ClosedFormResolvent)->Arg(32)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ApproxSpaceBuild(benchmark::State& state) {
  const SpectralModel model = surrogate(3, static_cast<int>(state.range(0)));
  const RegularizedFamily family = make_family(model, targets(3), 64);
  for (auto _ : state) benchmark::DoNotOptimize(ApproxSpace(family, model));
}
BENCHMARK(BM_ApproxSpaceBuild)->Arg(32)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_LadderStep(benchmark::State& state) {
  const Experiment exp(surrogate(2, 100), targets(2));
  LadderConfig cfg;
  cfg.kind = LadderKind::Schrodinger;
  cfg.n_values = {static_cast<int>(state.range(0))};
  cfg.t_values = {1.0};
  cfg.probes = standard_probes(exp.space(), 7);
  cfg.transport_lambda = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_ladder(exp, cfg));
}
BENCHMARK(BM_LadderStep)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler release.
BENCHMARK_MAIN();
