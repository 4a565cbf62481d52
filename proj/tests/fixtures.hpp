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

// Small model builders shared by the test binaries.

#ifndef SYMEV_TESTS_FIXTURES_HPP_
#define SYMEV_TESTS_FIXTURES_HPP_

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symev/network.hpp"

namespace symev::fixture {

inline LayerSpec Lstm(std::size_t units, bool seq = false) {
  LayerSpec s;
  s.kind = LayerKind::kLstm;
  s.units = units;
  s.return_sequences = seq;
  return s;
}

inline LayerSpec Irnn(std::size_t units, bool seq = false) {
  LayerSpec s = Lstm(units, seq);
  s.kind = LayerKind::kIrnn;
  return s;
}

inline LayerSpec Conv(std::size_t filters, std::size_t kernel, Activation act,
                      std::size_t stride = 1) {
  LayerSpec s;
  s.kind = LayerKind::kConv1d;
  s.units = filters;
  s.kernel = kernel;
  s.stride = stride;
  s.activation = act;
  return s;
}

inline LayerSpec Pool(std::size_t size, std::size_t stride) {
  LayerSpec s;
  s.kind = LayerKind::kMaxPool1d;
  s.size = size;
  s.stride = stride;
  return s;
}

inline LayerSpec GlobalPool() {
  LayerSpec s;
  s.kind = LayerKind::kGlobalMaxPool;
  return s;
}

inline LayerSpec Dense(std::size_t units, Activation act = Activation::kLinear) {
  LayerSpec s;
  s.kind = LayerKind::kDense;
  s.units = units;
  s.activation = act;
  return s;
}

inline LayerSpec Sigmoid() {
  LayerSpec s;
  s.kind = LayerKind::kSigmoid;
  return s;
}

inline std::vector<VariableSpec> Specs(const std::vector<std::size_t>& sizes,
                                       const std::vector<bool>& ordered) {
  std::vector<VariableSpec> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (ordered[i]) {
      std::vector<double> splits;
      for (std::size_t k = 1; k < sizes[i]; ++k) splits.push_back(static_cast<double>(k));
      out.push_back(VariableSpec::Continuous("x" + std::to_string(i), splits));
    } else {
      std::vector<std::string> cats;
      for (std::size_t k = 0; k < sizes[i]; ++k) cats.push_back("c" + std::to_string(k));
      out.push_back(VariableSpec::Categorical("z" + std::to_string(i), cats));
    }
  }
  return out;
}

struct Toy {
  std::vector<VariableSpec> specs;
  std::vector<std::size_t> sizes;
  std::vector<SymbolSequence> inputs;
  std::vector<int> targets;
  std::vector<double> scales;
};

// Random toy batch over 3 variables, one unordered.
inline Toy MakeToy(std::mt19937_64& rng, std::size_t batch = 3, std::size_t max_steps = 6) {
  Toy toy;
  toy.sizes = {3, 4, 2};
  toy.specs = Specs(toy.sizes, {true, false, true});
  std::uniform_real_distribution<double> scale(0.2, 2.0);
  for (std::size_t i = 0; i < batch; ++i) {
    const std::size_t steps = max_steps - (i % 3);
    toy.inputs.push_back(oracle::RandomSequence(toy.sizes, steps, rng));
    toy.targets.push_back(static_cast<int>(i % 2));
    toy.scales.push_back(scale(rng));
  }
  return toy;
}

template <typename T>
Network<T> MakeNetwork(EmbeddingVariant variant, std::vector<LayerSpec> layers, const Toy& toy,
                       std::uint64_t seed, std::size_t chop_count = 1, std::size_t dim = 3) {
  NetworkConfig cfg;
  cfg.embedding.variant = variant;
  cfg.embedding.dim = dim;
  cfg.embedding.init_scale = 0.5;
  cfg.layers = std::move(layers);
  cfg.chop_count = chop_count;
  cfg.seed = seed;
  std::mt19937_64 rng(seed);
  std::optional<Vocabulary> vocab;
  if (variant == EmbeddingVariant::kWdE) {
    // Threshold 2 leaves some words out so the OOV column is exercised.
    vocab = Vocabulary::Build(toy.inputs, {VocabThreshold::Kind::kMinCount, 2});
  }
  return Network<T>::Create(cfg, toy.specs, vocab, rng);
}

struct Template {
  std::string name;
  EmbeddingVariant variant;
  std::vector<LayerSpec> layers;
  std::size_t chop_count = 1;
};

// The four architecture families at toy size.
inline std::vector<Template> GradientTemplates() {
  return {
      {"WdE-LSTM", EmbeddingVariant::kWdE, {Lstm(4), Dense(1), Sigmoid()}},
      {"SCE-LSTM", EmbeddingVariant::kSCE, {Lstm(4), Dense(1), Sigmoid()}},
      {"ICE-LSTM", EmbeddingVariant::kICE, {Lstm(4), Dense(1), Sigmoid()}},
      {"SCE-conv1d-maxpool-iRNN",
       EmbeddingVariant::kSCE,
       {Conv(3, 2, Activation::kRelu), Pool(2, 2), Irnn(4), Dense(1), Sigmoid()}},
  };
}

}  // namespace symev::fixture

#endif  // SYMEV_TESTS_FIXTURES_HPP_
