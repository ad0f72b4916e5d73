#include "irsplit/admm.hpp"
#include "irsplit/problems.hpp"
#include "irsplit/prox.hpp"
#include "irsplit/subproblem.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace irsplit;

namespace {

Point random_point(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Point p(n);
  for (Index i = 0; i < n; ++i) p(i) = nd(rng);
  return p;
}

void BM_SoftThreshold(benchmark::State& state) {
  const Point u = random_point(state.range(0), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(soft_threshold(u, 0.5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SoftThreshold)->Arg(300)->Arg(10000);

void BM_CgStep(benchmark::State& state) {
  const Index n = state.range(0);
  auto inst = synthetic_lasso(n / 3, n, 1.0, 0.01, 2);
  auto fproc = make_quadratic_fprocedure(inst.problem.a(), inst.problem.b());
  const Point z = random_point(n, 3);
  for (auto _ : state) {
    auto session = fproc->open(Point::Zero(n), z, 1.0, Point::Zero(n));
    benchmark::DoNotOptimize(session->next());
  }
}
BENCHMARK(BM_CgStep)->Arg(300)->Arg(3000);

void BM_AdmmLasso(benchmark::State& state) {
  auto inst = synthetic_lasso(100, 300, 1.0, 0.01, 0);
  admm::ADMMParams p = admm::lasso_defaults();
  if (state.range(0) == 0) {
    p.core.alpha = 0.0;
    p.core.rho_lo = p.core.rho_hi = 1.0;
  }
  std::int64_t outer = 0;
  for (auto _ : state) {
    const auto run = admm::run_admm(inst.problem, p);
    outer = run.record.outer_iters;
  }
  state.counters["outer"] = static_cast<double>(outer);
}
BENCHMARK(BM_AdmmLasso)->ArgName("inertial")->Arg(0)->Arg(1)
    ->Unit(benchmark::kMillisecond);

void BM_AdmmLogistic(benchmark::State& state) {
  auto inst = synthetic_logistic(50, 31, 0);
  const admm::ADMMParams p = admm::logistic_defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(admm::run_admm(inst.problem, p));
  }
}
BENCHMARK(BM_AdmmLogistic)->Unit(benchmark::kMillisecond);

void BM_FistaLasso(benchmark::State& state) {
  auto inst = synthetic_lasso(100, 300, 1.0, 0.01, 0);
  FistaConfig cfg;
  std::int64_t iters = 0;
  for (auto _ : state) {
    const auto run = fista_solve(inst.problem, cfg);
    iters = run.record.outer_iters;
  }
  state.counters["outer"] = static_cast<double>(iters);
}
BENCHMARK(BM_FistaLasso)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
