#include <benchmark/benchmark.h>

#include "kappa/kn.hpp"
#include "kappa/series.hpp"

using namespace kappa;

namespace {

TruncSeries<Rational> dense_series(int n, int order) {
  TruncSeries<Rational> s(n, order);
  int v = 1;
  std::function<void(Multi&, int, int)> rec = [&](Multi& m, int var, int left) {
    if (var == n) {
      s.set(m, rat(v % 7 - 3, (v % 3) + 1));
      ++v;
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m[static_cast<size_t>(var)] = e;
      rec(m, var + 1, left - e);
    }
    m[static_cast<size_t>(var)] = 0;
  };
  Multi m(static_cast<size_t>(n), 0);
  rec(m, 0, order);
  return s;
}

void BM_SeriesMul(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  int order = static_cast<int>(state.range(1));
  auto a = dense_series(n, order), b = dense_series(n, order);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMul)->Args({1, 8})->Args({2, 6});

void BM_SeriesCompose(benchmark::State& state) {
  int order = static_cast<int>(state.range(0));
  auto f = dense_series(1, order);
  auto g = dense_series(1, order);
  g.set({0}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(series_compose(f, {g}));
}
BENCHMARK(BM_SeriesCompose)->Arg(6)->Arg(10);

void BM_PbwNormalize(benchmark::State& state) {
  // X1 sigma^{-1} X1 s[1;1,1] X1 — a word that exercises every rewrite rule
  std::vector<GeneratorSymbol> word = {
      GeneratorSymbol::x(1), GeneratorSymbol::sigma_pow(-1), GeneratorSymbol::x(1),
      GeneratorSymbol::sigma(1, {1, 1}), GeneratorSymbol::x(1)};
  for (auto _ : state) benchmark::DoNotOptimize(pbw_normalize(word, 1, 1));
}
BENCHMARK(BM_PbwNormalize);

void BM_KnMulN2(benchmark::State& state) {
  KnElement a = pbw_normalize({GeneratorSymbol::x(1), GeneratorSymbol::sigma_pow(-1)}, 1, 2);
  KnElement b = pbw_normalize({GeneratorSymbol::x(2), GeneratorSymbol::sigma(1, {2, 2})}, 1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kn_mul(a, b));
}
BENCHMARK(BM_KnMulN2);

}  // namespace

BENCHMARK_MAIN();
