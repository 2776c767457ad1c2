#include <map>

#include <benchmark/benchmark.h>

#include "skm/skm.hpp"

namespace {

const skm::DataSet& sample(std::size_t n, std::size_t d) {
  static std::map<std::pair<std::size_t, std::size_t>, skm::DataSet> cache;
  auto it = cache.find({n, d});
  if (it == cache.end()) it = cache.emplace(std::pair{n, d}, skm::synthetic::gaussian(n, d, 42)).first;
  return it->second;
}

const skm::RadialKernel& kernel(std::size_t d) {
  static std::map<std::size_t, skm::RadialKernel> cache;
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, skm::RadialKernel(skm::KernelSpec{}, d)).first;
  return it->second;
}

// n, k
void BM_KCenter(benchmark::State& state) {
  const auto& data = sample(static_cast<std::size_t>(state.range(0)), 5);
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto sel = skm::kcenter_greedy(data, k, skm::FirstCenter::index(0));
    benchmark::DoNotOptimize(sel.order.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KCenter)->Args({10000, 100})->Args({20000, 100})->Args({40000, 100})->Unit(benchmark::kMillisecond);

// n, k_max; eps = 0 so every run reaches k_max
void BM_Fit(benchmark::State& state) {
  const auto& data = sample(static_cast<std::size_t>(state.range(0)), 5);
  skm::FitOptions o;
  o.k_max = static_cast<std::size_t>(state.range(1));
  o.epsilon = 0.0;
  o.first = skm::FirstCenter::index(0);
  for (auto _ : state) {
    auto mean = skm::fit(data, kernel(5), o);
    benchmark::DoNotOptimize(mean.alpha.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)
    ->Args({10000, 300})
    ->Args({20000, 300})
    ->Args({40000, 300})
    ->Args({20000, 100})
    ->Args({20000, 600})
    ->Unit(benchmark::kMillisecond);

// k0, queries: sparse evaluation against the full-mean baseline of n = 20000
void BM_EvaluateSparse(benchmark::State& state) {
  const auto& data = sample(20000, 5);
  skm::FitOptions o;
  o.k_max = static_cast<std::size_t>(state.range(0));
  o.epsilon = 0.0;
  const auto mean = skm::fit(data, kernel(5), o);
  const auto& queries = sample(static_cast<std::size_t>(state.range(1)), 5).points();
  for (auto _ : state) {
    auto v = skm::evaluate(mean, queries);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_EvaluateSparse)->Args({100, 1000})->Args({400, 1000})->Unit(benchmark::kMillisecond);

void BM_EvaluateFull(benchmark::State& state) {
  const auto& data = sample(20000, 5);
  const auto& queries = sample(static_cast<std::size_t>(state.range(0)), 5).points();
  for (auto _ : state) {
    auto v = skm::evaluate_full(data, kernel(5), queries);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvaluateFull)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
