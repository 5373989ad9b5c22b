#include <benchmark/benchmark.h>

#include "momatch/distributions.hpp"
#include "momatch/duality.hpp"
#include "momatch/halfspace.hpp"
#include "momatch/learner.hpp"
#include "momatch/lp.hpp"
#include "momatch/moments.hpp"
#include "momatch/rng.hpp"

using namespace momatch;

namespace {

lp::LinearProgram random_lp(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(cols);
  for (auto& v : c) v = rng.uniform();
  lp::LinearProgram p(lp::Sense::kMaximize, c);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<double> row(cols);
    for (auto& v : row) v = rng.uniform();
    p.add_constraint(std::move(row), lp::Relation::kLessEqual, 1.0 + rng.uniform());
  }
  return p;
}

std::vector<LabeledSample> halfspace_data(std::size_t n, std::size_t count) {
  const auto points = sample(DistributionSpec::gaussian(n), 7, count);
  std::vector<double> w(n, 1.0);
  const auto f = HalfspaceFunction::single(Halfspace(w, 0.0));
  std::vector<LabeledSample> out;
  for (const auto& x : points) out.push_back({x, f(x)});
  return out;
}

void BM_SolveDenseLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = random_lp(n, 2 * n, 11);
  for (auto _ : state) benchmark::DoNotOptimize(lp::solve(p).objective);
}
BENCHMARK(BM_SolveDenseLp)->Arg(20)->Arg(60)->Arg(120);

void BM_FitL1(benchmark::State& state) {
  const auto data = halfspace_data(3, static_cast<std::size_t>(state.range(0)));
  const int degree = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fit_l1(data, degree).objective);
}
BENCHMARK(BM_FitL1)->Args({500, 2})->Args({2000, 2})->Args({2000, 4})->Unit(benchmark::kMillisecond);

void BM_FoolPtf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Polynomial::Terms t;
  std::vector<int> e(n, 0);
  e[0] = e[1] = 1;
  t[MultiIndex(e)] = 1.0;
  const Polynomial p(n, t);
  for (auto _ : state) benchmark::DoNotOptimize(fool_ptf(p, n, 2).worst_gap);
}
BENCHMARK(BM_FoolPtf)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EmpiricalMoments(benchmark::State& state) {
  const auto points = sample(DistributionSpec::gaussian(3), 3, static_cast<std::size_t>(state.range(0)));
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_moments(points, k).values().data());
}
BENCHMARK(BM_EmpiricalMoments)->Args({10000, 2})->Args({10000, 6})->Args({100000, 4});

}  // namespace
BENCHMARK_MAIN();
