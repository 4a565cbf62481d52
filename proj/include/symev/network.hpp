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

// Embedding + layer stack + sigmoid head, with optional sequence chopping.
//
// The layer list splits into an encoder (up to and including the first layer
// that collapses time) and a head. With chop_count C > 1 the embedded
// sequence is cut into contiguous chunks of ceil(T / C) steps, the encoder
// runs on each chunk independently and the chunk features are max-pooled
// element-wise before the head.

#ifndef SYMEV_NETWORK_HPP_
#define SYMEV_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symev/adam.hpp"
#include "symev/embeddings.hpp"
#include "symev/layers.hpp"
#include "symev/sequence.hpp"
#include "symev/tensor.hpp"

namespace symev {

enum class Precision { kFloat32, kFloat64 };
enum class Exec { kSerial, kParallel };

struct EmbeddingConfig {
  EmbeddingVariant variant = EmbeddingVariant::kSCE;
  std::size_t dim = 2;        // d for WdE / SCE
  double init_scale = 0.05;   // WdE / SCE uniform init half-width
  double ice_scale = 1.0;     // ICE grid half-width
  VocabThreshold vocab{VocabThreshold::Kind::kMinCount, 2.0};

  bool operator==(const EmbeddingConfig&) const = default;
};

struct NetworkConfig {
  EmbeddingConfig embedding;
  std::vector<LayerSpec> layers;
  std::size_t chop_count = 1;
  AdamConfig optimizer;
  Precision precision = Precision::kFloat32;
  std::uint64_t seed = 0;

  void Validate() const;
  bool operator==(const NetworkConfig&) const = default;
};

// Half-open [begin, end) step ranges of the chunks for a sequence.
std::vector<std::pair<std::size_t, std::size_t>> ChopBounds(std::size_t steps,
                                                           std::size_t chop_count);

template <typename T>
struct ChunkTrace {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<Tensor<T>> inputs;          // input of each encoder layer
  std::vector<LayerCache<T>> caches;
  Tensor<T> feature;                      // [1, encoder width]
};

template <typename T>
struct ForwardTrace {
  EmbeddingCache embedding;
  Tensor<T> embedded;
  std::vector<ChunkTrace<T>> chunks;
  std::vector<std::size_t> pool_source;   // winning chunk per feature
  Tensor<T> pooled;
  std::vector<Tensor<T>> head_inputs;
  std::vector<LayerCache<T>> head_caches;
  T logit = T(0);
  T probability = T(0);
};

template <typename T>
class Network {
 public:
  Network() = default;

  static Network Create(const NetworkConfig& config,
                        std::span<const VariableSpec> specs,
                        std::optional<Vocabulary> vocabulary, std::mt19937_64& rng);
  // Zero-valued network with the right shapes, for checkpoint restore.
  static Network Shaped(const NetworkConfig& config,
                        std::vector<std::size_t> alphabet_sizes,
                        std::vector<bool> ordered,
                        std::optional<Vocabulary> vocabulary);

  const NetworkConfig& config() const { return config_; }
  Embedding<T>& embedding() { return embedding_; }
  const Embedding<T>& embedding() const { return embedding_; }
  const std::vector<Layer<T>>& layers() const { return layers_; }
  std::vector<Layer<T>>& layers() { return layers_; }
  std::size_t encoder_depth() const { return encoder_depth_; }
  std::size_t encoder_width() const;

  std::vector<Tensor<T>*> Parameters();
  std::vector<const Tensor<T>*> Parameters() const;
  std::vector<std::string> ParameterNames() const;
  std::vector<Tensor<T>> ZeroGradients() const;
  std::size_t ParameterCount() const;

  // Returns the predicted probability of an event.
  T Forward(const SymbolSequence& input, ForwardTrace<T>& trace,
            Exec exec = Exec::kSerial) const;
  T Predict(const SymbolSequence& input, Exec exec = Exec::kSerial) const;

  // Back-propagates d(loss)/d(logit) into `grads` (layout of Parameters()).
  void Backward(const SymbolSequence& input, const ForwardTrace<T>& trace, T dlogit,
                std::span<Tensor<T>> grads, Exec exec = Exec::kSerial) const;

  // Forward and backward of scale * BCE(target, p) for one sample. Returns
  // the unweighted clamped BCE term.
  T Accumulate(const SymbolSequence& input, int target, T scale,
               std::span<Tensor<T>> grads, Exec exec = Exec::kSerial) const;

  // Encoder stack on one chunk of embedded steps; fills the chunk trace.
  Tensor<T> EncodeChunk(const Tensor<T>& chunk, ChunkTrace<T>& trace) const;
  // Chop, encode and max-pool an embedded sequence.
  Tensor<T> ChopAndPool(const Tensor<T>& embedded, std::size_t chop_count,
                        ForwardTrace<T>& trace, Exec exec = Exec::kSerial) const;

  // ICE order constraint after an optimizer step.
  void ProjectConstraints() { embedding_.Project(); }

 private:
  void BuildLayers(std::size_t input_dim);
  std::size_t FirstLayerGrad(std::size_t layer) const;
  void EncoderBackward(const Tensor<T>& embedded, const ChunkTrace<T>& chunk,
                       const Tensor<T>& d_feature, std::span<Tensor<T>> grads,
                       Tensor<T>& d_embedded) const;

  NetworkConfig config_;
  Embedding<T> embedding_;
  std::vector<Layer<T>> layers_;
  std::size_t encoder_depth_ = 0;
};

}  // namespace symev

#endif  // SYMEV_NETWORK_HPP_
