#include <benchmark/benchmark.h>

#include <random>

#include "msvm/dual_solver.hpp"
#include "msvm/kernel.hpp"
#include "msvm/model.hpp"

namespace {

msvm::Matrix uniform(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  msvm::Matrix m(rows, cols);
  for (double& v : m.values()) v = u(rng);
  return m;
}

// Labels from random hyperplanes, so each column has both classes.
msvm::LabelMatrix labels(const msvm::Matrix& x, std::size_t m, std::uint64_t seed) {
  const auto planes = uniform(x.cols(), m, seed);
  const auto z = msvm::multiply(x, planes);
  return msvm::LabelMatrix::from_signs(z);
}

void BM_AugmentedGram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform(n, 72, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(msvm::augmented_gram(x, x, msvm::KernelSpec::rbf(0.3)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AugmentedGram)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_GramProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto kbar = uniform(n, n, 2);
  const auto w = uniform(n, m, 3);
  msvm::Matrix out(n, m);
  for (auto _ : state) {
    msvm::multiply_into(kbar, w, out);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.counters["madd/s"] = benchmark::Counter(static_cast<double>(n * n * m),
                                                benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_GramProduct)->ArgsProduct({{500}, {1, 2, 4, 6, 8}});

void BM_AgdSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = uniform(n, 72, 4);
  const msvm::DualProblem p(msvm::augmented_gram(x, x, msvm::KernelSpec::rbf(0.3)),
                            labels(x, 6, 5), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(msvm::agd_solve(p));
}
BENCHMARK(BM_AgdSolve)->Arg(100)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

// Matrix fit against binary relevance on a 500 x 72 x 6 problem.
void BM_Fit(benchmark::State& state) {
  const auto x = uniform(500, 72, 6);
  const auto y = labels(x, 6, 7);
  const auto kernel = msvm::KernelSpec::rbf(0.3);
  msvm::BinaryRelevanceOptions br;
  br.share_gram = state.range(0) == 2;
  for (auto _ : state) {
    if (state.range(0) == 0) {
      benchmark::DoNotOptimize(msvm::fit_matrix_svm(x, y, kernel, 1.0));
    } else {
      benchmark::DoNotOptimize(msvm::fit_br_svm(x, y, kernel, 1.0, {}, br));
    }
  }
  state.SetLabel(state.range(0) == 0 ? "matrix" : state.range(0) == 1 ? "br" : "br-shared-gram");
}
BENCHMARK(BM_Fit)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
