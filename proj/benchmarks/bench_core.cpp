#include <benchmark/benchmark.h>

#include "nlsg/rates_plant.hpp"
#include "nlsg/rates_reich.hpp"
#include "nlsg/semigroup.hpp"
#include "nlsg/verify.hpp"

using namespace nlsg;

static void BM_ResolventCubic(benchmark::State& state) {
  const Operator op = Operator::diagonal({ScalarFn::power(3.0), ScalarFn::power(3.0)});
  Vector x(2);
  x << 0.8, -0.5;
  for (auto _ : state) benchmark::DoNotOptimize(op.resolvent(0.7, x));
}
BENCHMARK(BM_ResolventCubic);

static void BM_ResolventLaplacianL3(benchmark::State& state) {
  const Instance inst = catalog::laplacian(Space::lp(3, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(inst.op.resolvent(0.7, inst.x0));
}
BENCHMARK(BM_ResolventLaplacianL3);

static void BM_ClIterate(benchmark::State& state) {
  const SemigroupEvaluator ev(Operator::diagonal({ScalarFn::power(3.0)}), Space::euclidean(1));
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ev.cl_iterate(0.5, Vector::Constant(1, 0.3), n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClIterate)->RangeMultiplier(16)->Range(16, 65536);

static void BM_PlantChain(benchmark::State& state) {
  const PlantParams p = plant_params(catalog::cubic());
  for (auto _ : state) benchmark::DoNotOptimize(plant_threshold(0.1, p));
}
BENCHMARK(BM_PlantChain);

static void BM_ReichChain(benchmark::State& state) {
  const ReichParams p = reich_params(catalog::constant_unit());
  for (auto _ : state) benchmark::DoNotOptimize(reich_threshold(0.25, p));
}
BENCHMARK(BM_ReichChain);

static void BM_VerifyPlant(benchmark::State& state) {
  const Instance inst = catalog::scalar_linear();
  const auto cert = plant_rate(0.25, plant_params(inst));
  SamplingPlan plan;
  plan.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(cert, inst, plan));
}
BENCHMARK(BM_VerifyPlant)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
