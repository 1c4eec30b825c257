#include <benchmark/benchmark.h>

#include "cmcert/bound_functions.hpp"
#include "cmcert/cm_verifier.hpp"
#include "cmcert/proof_replay.hpp"

namespace {

using namespace cmcert;

void BM_Polygamma(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const PrecisionPolicy policy = PrecisionPolicy::with_target(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(polygamma(m, BigRational(7, 3), policy));
}
BENCHMARK(BM_Polygamma)->ArgsProduct({{1, 4, 10}, {128, 512, 2048}});

void BM_PolygammaQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(polygamma_quadrature_crosscheck(2, BigRational(3, 2), 128));
}
BENCHMARK(BM_PolygammaQuadrature)->Unit(benchmark::kMillisecond);

void BM_GDerivatives(benchmark::State& state) {
  const auto k_max = static_cast<unsigned>(state.range(0));
  const PrecisionPolicy policy = PrecisionPolicy::with_target(256);
  const BoundModel& model = BoundModel::reference();
  for (auto _ : state) benchmark::DoNotOptimize(model.g_derivatives(k_max, BigRational(5, 4), policy));
}
BENCHMARK(BM_GDerivatives)->Arg(0)->Arg(4)->Arg(8)->Arg(12);

void BM_ThetaChain(benchmark::State& state) {
  const ThetaFixtures f = ThetaFixtures::from_table(ConstantTable::builtin());
  for (auto _ : state) {
    const ExpPoly theta = theta_from_kernel(f.remainder_terms, f.theta_scale);
    benchmark::DoNotOptimize(ThetaChain::build(theta, f.theta2_scale));
  }
}
BENCHMARK(BM_ThetaChain)->Unit(benchmark::kMicrosecond);

void BM_Certificate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(chain_positivity_certificate());
}
BENCHMARK(BM_Certificate)->Unit(benchmark::kMillisecond);

void BM_CmScanDefaultGrid(benchmark::State& state) {
  const GridSpec grid = GridSpec::default_grid();
  const PrecisionPolicy policy = PrecisionPolicy::with_target(256);
  for (auto _ : state) benchmark::DoNotOptimize(cm_scan(FunctionKind::G, 8, grid, policy));
}
BENCHMARK(BM_CmScanDefaultGrid)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
