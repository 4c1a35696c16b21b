#include <benchmark/benchmark.h>

#include <random>

#include "qtl/spectral.hpp"

namespace {

qtl::QTensor random_tensor(qtl::Index n, qtl::Index n3, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<qtl::QMat> slices;
  for (qtl::Index t = 0; t < n3; ++t) {
    qtl::QMat m(n, n);
    for (qtl::Index r = 0; r < n; ++r) {
      for (qtl::Index c = 0; c < n; ++c) m.set(r, c, qtl::Quat(nd(rng), nd(rng), nd(rng), nd(rng)));
    }
    slices.push_back(std::move(m));
  }
  return qtl::QTensor(std::move(slices));
}

// Rank-deficient square tensor: A B with an n x (n-1) inner dimension.
qtl::QTensor singular_tensor(qtl::Index n, qtl::Index n3) {
  const auto a = random_tensor(n, n3, 3);
  const auto b = random_tensor(n, n3, 4);
  std::vector<qtl::QMat> sa, sb;
  for (qtl::Index t = 0; t < n3; ++t) {
    sa.emplace_back(a.slice(t).d().leftCols(n - 1), a.slice(t).c().leftCols(n - 1));
    sb.emplace_back(b.slice(t).d().topRows(n - 1), b.slice(t).c().topRows(n - 1));
  }
  return qtl::QTensor(std::move(sa)) * qtl::QTensor(std::move(sb));
}

void BM_QtProduct(benchmark::State& state) {
  const auto n = state.range(0), n3 = state.range(1);
  const auto a = random_tensor(n, n3, 1);
  const auto b = random_tensor(n, n3, 2);
  for (auto _ : state) {
    // Fresh copy: bcirc_z is rebuilt each iteration.
    const qtl::QTensor x(a.slices());
    benchmark::DoNotOptimize(x * b);
  }
}
BENCHMARK(BM_QtProduct)->Args({4, 4})->Args({8, 8})->Args({16, 8})->Args({8, 32});

void BM_BlockDiagonalize(benchmark::State& state) {
  const auto a = random_tensor(state.range(0), state.range(1), 5);
  const qtl::SpectralOptions opts{state.range(2) != 0};
  a.bcirc_z();
  for (auto _ : state) benchmark::DoNotOptimize(qtl::block_diagonalize(a, opts));
}
BENCHMARK(BM_BlockDiagonalize)
    ->Args({4, 4, 0})->Args({8, 8, 0})->Args({16, 8, 0})->Args({8, 32, 0})
    ->Args({8, 8, 1})->Args({8, 32, 1});

void BM_BlockReassemble(benchmark::State& state) {
  const auto b = qtl::block_diagonalize(random_tensor(state.range(0), state.range(1), 6),
                                        qtl::SpectralOptions{false});
  const qtl::SpectralOptions opts{state.range(2) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(qtl::block_reassemble(b, opts));
}
BENCHMARK(BM_BlockReassemble)->Args({8, 8, 0})->Args({8, 32, 0})->Args({8, 8, 1});

void BM_QtDrazin(benchmark::State& state) {
  const auto a = singular_tensor(state.range(0), state.range(1));
  const qtl::SpectralOptions opts{state.range(2) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(qtl::qt_drazin(a, std::nullopt, opts));
}
BENCHMARK(BM_QtDrazin)->Args({4, 4, 0})->Args({4, 4, 1})->Args({8, 8, 0})->Args({8, 8, 1});

}  // namespace

BENCHMARK_MAIN();
