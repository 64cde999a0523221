#include <benchmark/benchmark.h>

#include <vector>

#include "fpot/criteria.hpp"
#include "fpot/generator.hpp"
#include "fpot/means.hpp"
#include "fpot/random.hpp"

namespace {

fpot::WeightedDistribution make_dist(std::size_t n) {
  fpot::Rng rng(1);
  std::vector<fpot::Atom> atoms;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back({rng.uniform(0.2, 9.8), rng.uniform(0.05, 1.0)});
    total += atoms.back().p;
  }
  for (auto& a : atoms) a.p /= total;
  return fpot::WeightedDistribution(std::move(atoms));
}

void BM_EvalPotential(benchmark::State& state) {
  const auto f = fpot::GeneratorFunction::from_expression("x^2.5", fpot::Interval(0, fpot::kInf));
  const auto d = make_dist(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fpot::eval_potential(f, d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvalPotential)->Arg(2)->Arg(64)->Arg(4096)->Arg(100000);

void BM_JetEval(benchmark::State& state) {
  const auto e = fpot::parse("sin(2*x)/(3-cos(2*x))");
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval_jet(x));
    x = x < 1.4 ? x + 1e-3 : 0.3;
  }
}
BENCHMARK(BM_JetEval);

void BM_Classify(benchmark::State& state) {
  const auto f = fpot::GeneratorFunction::from_expression("arcosh(x)", fpot::Interval(1, 50));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fpot::classify_potential(f, n).potential_type);
}
BENCHMARK(BM_Classify)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GenerateF(benchmark::State& state) {
  const auto h = fpot::HSpec::from_expression("tanh(x)", fpot::Interval(0.1, 3));
  for (auto _ : state) benchmark::DoNotOptimize(fpot::generate_f(h).inner_nodes());
}
BENCHMARK(BM_GenerateF)->Unit(benchmark::kMillisecond);

void BM_GeneratedEval(benchmark::State& state) {
  const auto f = fpot::generate_f(fpot::HSpec::from_expression("tanh(x)", fpot::Interval(0.1, 3)))
                     .function();
  const auto d = make_dist(64);
  std::vector<double> xs;
  for (auto a : d.atoms()) xs.push_back(0.1 + 0.29 * a.x);
  const auto scaled = d.with_values(xs);
  for (auto _ : state) benchmark::DoNotOptimize(fpot::eval_potential(f, scaled));
}
BENCHMARK(BM_GeneratedEval);

}  // namespace

BENCHMARK_MAIN();
