#include <benchmark/benchmark.h>

#include <vector>

#include "specemd/distances.hpp"
#include "specemd/evaluation.hpp"
#include "specemd/kernels.hpp"
#include "specemd/random_graphs.hpp"
#include "specemd/spectral.hpp"

using namespace specemd;

namespace {

std::vector<ConnectivityGraph> graphs(std::size_t count, std::size_t n) {
  std::vector<ConnectivityGraph> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(i % 2 == 0 ? generate_ws(n, 4 * n, 0.2, i) : generate_er(n, 4 * n, i));
  return out;
}

std::vector<int> alternating_labels(std::size_t count) {
  std::vector<int> y(count);
  for (std::size_t i = 0; i < count; ++i) y[i] = i % 2 == 0 ? 1 : -1;
  return y;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial() : Execution{};
}

void BM_Spectra(benchmark::State& state) {
  const auto g = graphs(32, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(spectra_of(g, exec_of(state)));
}
BENCHMARK(BM_Spectra)->ArgsProduct({{0, 1}, {64, 128}})->ArgNames({"parallel", "n"})
    ->Unit(benchmark::kMillisecond);

void BM_PairwiseEmd(benchmark::State& state) {
  const auto spectra = spectra_of(graphs(static_cast<std::size_t>(state.range(1)), 90));
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(reference::pairwise_distances(spectra));
    else
      benchmark::DoNotOptimize(pairwise_distances(spectra));
  }
}
BENCHMARK(BM_PairwiseEmd)->ArgsProduct({{0, 1}, {94, 300}})->ArgNames({"parallel", "subjects"})
    ->Unit(benchmark::kMillisecond);

void BM_LinearGram(benchmark::State& state) {
  std::vector<FeatureVector> features;
  for (const auto& g : graphs(94, 264)) features.push_back(bag_of_edges(g));
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(reference::linear_gram(features));
    else
      benchmark::DoNotOptimize(linear_gram(features));
  }
}
BENCHMARK(BM_LinearGram)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_CrossValidate(benchmark::State& state) {
  const auto spectra = spectra_of(graphs(94, 90));
  const auto gram = emd_kernel_gram(spectra).values;
  const auto labels = alternating_labels(94);
  CvConfig config;
  config.repetitions = 20;
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(reference::cross_validate(gram, labels, config));
    else
      benchmark::DoNotOptimize(cross_validate(gram, labels, config));
  }
}
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
