#include <benchmark/benchmark.h>

#include "compopt/estimators.hpp"
#include "compopt/oracles.hpp"
#include "compopt/problems.hpp"
#include "compopt/rng.hpp"

namespace {

using namespace compopt;

MeanVarianceProblem make_problem() {
  return generate_mean_variance(/*n=*/200, /*N=*/20, /*kappa=*/10.0,
                                /*seed=*/42, /*lambda=*/0.1);
}

void BM_FullGradient(benchmark::State& state) {
  const auto p = make_problem();
  const Vector x = Vector::Ones(p.dim_x());
  QueryCounter qc;
  for (auto _ : state) {
    benchmark::DoNotOptimize(full_gradient(p, x, qc));
  }
}
BENCHMARK(BM_FullGradient);

void BM_SvrgEstimate(benchmark::State& state) {
  const auto p = make_problem();
  const Vector x = Vector::Ones(p.dim_x());
  QueryCounter qc;
  const auto snap = make_svrg_snapshot(p, x, /*epoch=*/0, qc);
  Xoshiro256 rng(7, "bench");
  const int A = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto batch = sample_minibatch(rng, p.m(), A);
    benchmark::DoNotOptimize(svrg_estimate(snap, p, x, batch, qc));
  }
}
BENCHMARK(BM_SvrgEstimate)->Arg(50)->Arg(500);

void BM_SagaEstimate(benchmark::State& state) {
  const auto p = make_problem();
  const Vector x = Vector::Ones(p.dim_x());
  QueryCounter qc;
  SagaTable table(p, x, qc);
  Xoshiro256 rng(7, "bench");
  const int A = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto batch = sample_minibatch(rng, p.m(), A);
    SagaBatchEvals evals;
    benchmark::DoNotOptimize(saga_estimate(table, p, x, batch, qc, &evals));
    saga_update_table(table, x, batch, evals);
  }
}
BENCHMARK(BM_SagaEstimate)->Arg(50)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
