#include <benchmark/benchmark.h>

#include "fourbody/dynamics.hpp"
#include "fourbody/escape.hpp"
#include "fourbody/minimize.hpp"
#include "fourbody/rng.hpp"

using namespace fourbody;

namespace {

Masses const kUnequal(0.5, 1.0 / 3.0, 1.0 / 6.0);

State unequal_escape(double beta) { return escape_state({{kUnequal, PairId(1, 2), 1, 1.0, 1.0}, beta}); }

void BM_SpectralDecompose(benchmark::State& state) {
  Rng rng(1);
  std::vector<Bivector4> input;
  for (int n = 0; n < 256; ++n) {
    input.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                       rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_decompose(input[i++ % input.size()]));
  }
}
BENCHMARK(BM_SpectralDecompose);

void BM_ObjectiveAndGradient(benchmark::State& state) {
  JacobiState const j = to_jacobi(unequal_escape(50.0));
  for (auto _ : state) benchmark::DoNotOptimize(objective_and_gradient(j));
}
BENCHMARK(BM_ObjectiveAndGradient);

void BM_ConstraintAndJacobian(benchmark::State& state) {
  JacobiState const j = to_jacobi(unequal_escape(50.0));
  ConstraintTarget const target = ConstraintTarget::canonical(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(constraint_and_jacobian(j, target));
}
BENCHMARK(BM_ConstraintAndJacobian);

void BM_Integrate(benchmark::State& state) {
  State const s = unequal_escape(50.0);
  Scheme const scheme = state.range(0) == 2 ? Scheme::kLeapfrog : Scheme::kComposition4;
  IntegratorConfig const cfg{1e-2, 10.0, scheme, 1000};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Integrate)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_MinimizeAtL(benchmark::State& state) {
  MinimizeConfig config;
  config.restarts = static_cast<int>(state.range(0));
  ConstraintTarget const target = ConstraintTarget::canonical(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_at_L(kUnequal, target, config));
}
BENCHMARK(BM_MinimizeAtL)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
