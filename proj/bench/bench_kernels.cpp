/* Copyright 2026 The symev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Serial reference kernels against their OpenMP versions.

#include <omp.h>

#include <random>
#include <sstream>
#include <vector>

#include <benchmark/benchmark.h>

#include "symev/dataset.hpp"
#include "symev/kernels.hpp"
#include "symev/network.hpp"
#include "symev/synthetic.hpp"

namespace symev {
namespace {

constexpr std::size_t kSamples = 64;
constexpr std::size_t kSteps = 96;
const std::vector<std::size_t> kAlphabet = {4, 4, 3, 5, 6};

std::vector<LabeledSample> MakeSamples() {
  std::mt19937_64 rng(1);
  std::vector<LabeledSample> out(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    auto& s = out[i];
    s.input.arity = kAlphabet.size();
    for (std::size_t t = 0; t < kSteps; ++t) {
      for (std::size_t a : kAlphabet) {
        s.input.symbols.push_back(
            static_cast<Symbol>(std::uniform_int_distribution<std::size_t>(0, a - 1)(rng)));
      }
    }
    s.target = static_cast<int>(i % 2);
  }
  return out;
}

Network<float> MakeNet(std::size_t chop_count) {
  std::vector<VariableSpec> specs;
  for (std::size_t v = 0; v < kAlphabet.size(); ++v) {
    std::vector<double> splits;
    for (std::size_t k = 1; k < kAlphabet[v]; ++k) splits.push_back(static_cast<double>(k));
    specs.push_back(VariableSpec::Continuous("v" + std::to_string(v), splits));
  }
  NetworkConfig cfg;
  cfg.embedding.variant = EmbeddingVariant::kSCE;
  cfg.embedding.dim = 8;
  LayerSpec lstm;
  lstm.kind = LayerKind::kLstm;
  lstm.units = 16;
  LayerSpec dense;
  dense.kind = LayerKind::kDense;
  dense.units = 1;
  LayerSpec sigmoid;
  sigmoid.kind = LayerKind::kSigmoid;
  cfg.layers = {lstm, dense, sigmoid};
  cfg.chop_count = chop_count;
  std::mt19937_64 rng(2);
  return Network<float>::Create(cfg, specs, std::nullopt, rng);
}

void Threads(const benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
}

void BM_PredictBatchSerial(benchmark::State& state) {
  const auto samples = MakeSamples();
  const auto net = MakeNet(1);
  for (auto _ : state) benchmark::DoNotOptimize(serial::PredictBatch(net, samples));
  state.SetItemsProcessed(state.iterations() * kSamples);
}

void BM_PredictBatchOmp(benchmark::State& state) {
  Threads(state);
  const auto samples = MakeSamples();
  const auto net = MakeNet(1);
  for (auto _ : state) benchmark::DoNotOptimize(omp::PredictBatch(net, samples));
  state.SetItemsProcessed(state.iterations() * kSamples);
}

template <bool kParallel>
void BM_BatchGradient(benchmark::State& state) {
  if (kParallel) Threads(state);
  const auto samples = MakeSamples();
  const auto net = MakeNet(1);
  std::vector<std::size_t> batch(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) batch[i] = i;
  auto grads = net.ZeroGradients();
  for (auto _ : state) {
    const auto r = kParallel ? omp::BatchGradient(net, samples, batch, 1.0f, grads)
                             : serial::BatchGradient(net, samples, batch, 1.0f, grads);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * kSamples);
}

template <bool kParallel>
void BM_ChoppedPredict(benchmark::State& state) {
  if (kParallel) Threads(state);
  const auto samples = MakeSamples();
  const auto net = MakeNet(8);
  const Exec exec = kParallel ? Exec::kParallel : Exec::kSerial;
  for (auto _ : state) {
    for (const auto& s : samples) benchmark::DoNotOptimize(net.Predict(s.input, exec));
  }
  state.SetItemsProcessed(state.iterations() * kSamples);
}

template <bool kParallel>
void BM_SymbolizeEntities(benchmark::State& state) {
  if (kParallel) Threads(state);
  SyntheticConfig cfg;
  cfg.entities = 80;
  const Schema schema = SyntheticSchema();
  std::istringstream csv(SyntheticCsv(cfg));
  const auto prepared = PrepareAll(ReadCsv(csv, schema), schema, Exec::kSerial);
  const auto specs = LearnPartition(prepared, schema);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kParallel ? omp::SymbolizeEntities(prepared, specs, SymbolizeMode::kInference)
                  : serial::SymbolizeEntities(prepared, specs, SymbolizeMode::kInference));
  }
  state.SetItemsProcessed(state.iterations() * cfg.entities);
}

BENCHMARK(BM_PredictBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictBatchOmp)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradient<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchGradient<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChoppedPredict<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChoppedPredict<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymbolizeEntities<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymbolizeEntities<true>)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace symev

BENCHMARK_MAIN();
