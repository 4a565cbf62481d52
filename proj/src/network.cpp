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

#include "symev/network.hpp"

#include <algorithm>

#include "symev/errors.hpp"
#include "symev/loss.hpp"
#include "symev/parallel.hpp"

namespace symev {

namespace {

template <typename T>
Tensor<T> SliceRows(const Tensor<T>& t, std::size_t begin, std::size_t end) {
  Tensor<T> out(end - begin, t.cols());
  std::copy(t.data() + begin * t.cols(), t.data() + end * t.cols(), out.data());
  return out;
}

}  // namespace

void NetworkConfig::Validate() const {
  if (layers.empty()) Fail(ErrorCode::kConfig, "network has no layers");
  if (layers.back().kind != LayerKind::kSigmoid) {
    Fail(ErrorCode::kConfig, "last layer must be sigmoid");
  }
  if (chop_count < 1) Fail(ErrorCode::kConfig, "chop_count must be >= 1");
  if (embedding.variant != EmbeddingVariant::kICE && embedding.dim == 0) {
    Fail(ErrorCode::kConfig, "embedding dim must be positive for WdE and SCE");
  }
  if (optimizer.learning_rate < 0.0 || optimizer.beta1 < 0.0 || optimizer.beta1 >= 1.0 ||
      optimizer.beta2 < 0.0 || optimizer.beta2 >= 1.0 || optimizer.epsilon <= 0.0) {
    Fail(ErrorCode::kConfig, "invalid ADAM settings");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> ChopBounds(std::size_t steps,
                                                           std::size_t chop_count) {
  if (steps == 0) Fail(ErrorCode::kEmptySequence, "cannot chop an empty sequence");
  if (chop_count == 0) Fail(ErrorCode::kConfig, "chop_count must be >= 1");
  const std::size_t length = (steps + chop_count - 1) / chop_count;
  std::vector<std::pair<std::size_t, std::size_t>> bounds;
  for (std::size_t begin = 0; begin < steps; begin += length) {
    bounds.emplace_back(begin, std::min(begin + length, steps));
  }
  return bounds;
}

template <typename T>
void Network<T>::BuildLayers(std::size_t input_dim) {
  config_.Validate();
  layers_.clear();
  encoder_depth_ = 0;
  std::size_t width = input_dim;
  for (std::size_t l = 0; l < config_.layers.size(); ++l) {
    layers_.emplace_back(config_.layers[l], width);
    width = layers_.back().output_dim();
    if (encoder_depth_ == 0 && !layers_.back().keeps_time()) encoder_depth_ = l + 1;
  }
  if (encoder_depth_ == 0) {
    Fail(ErrorCode::kConfig,
         "no layer collapses time (use a recurrent layer without return_sequences "
         "or global_maxpool)");
  }
  for (std::size_t l = encoder_depth_; l + 1 < layers_.size(); ++l) {
    if (layers_[l].kind() != LayerKind::kDense) {
      Fail(ErrorCode::kConfig, "only dense layers may follow the sequence encoder");
    }
  }
  if (layers_.back().input_dim() != 1) {
    Fail(ErrorCode::kConfig, "sigmoid output must have width 1, got " +
                                 std::to_string(layers_.back().input_dim()));
  }
}

template <typename T>
Network<T> Network<T>::Create(const NetworkConfig& config,
                              std::span<const VariableSpec> specs,
                              std::optional<Vocabulary> vocabulary,
                              std::mt19937_64& rng) {
  Network net;
  net.config_ = config;
  net.embedding_ = Embedding<T>::Create(config.embedding.variant, specs,
                                        config.embedding.dim, std::move(vocabulary),
                                        config.embedding.init_scale,
                                        config.embedding.ice_scale, rng);
  net.BuildLayers(net.embedding_.output_dim());
  for (auto& layer : net.layers_) layer.Initialize(rng);
  return net;
}

template <typename T>
Network<T> Network<T>::Shaped(const NetworkConfig& config,
                              std::vector<std::size_t> alphabet_sizes,
                              std::vector<bool> ordered,
                              std::optional<Vocabulary> vocabulary) {
  Network net;
  net.config_ = config;
  net.embedding_ = Embedding<T>::Shaped(config.embedding.variant, std::move(alphabet_sizes),
                                        std::move(ordered), config.embedding.dim,
                                        std::move(vocabulary));
  net.BuildLayers(net.embedding_.output_dim());
  return net;
}

template <typename T>
std::size_t Network<T>::encoder_width() const {
  return layers_[encoder_depth_ - 1].output_dim();
}

template <typename T>
std::vector<Tensor<T>*> Network<T>::Parameters() {
  std::vector<Tensor<T>*> out;
  for (auto& t : embedding_.tables()) out.push_back(&t);
  for (auto& layer : layers_) {
    for (auto& p : layer.params()) out.push_back(&p);
  }
  return out;
}

template <typename T>
std::vector<const Tensor<T>*> Network<T>::Parameters() const {
  std::vector<const Tensor<T>*> out;
  for (const auto& t : embedding_.tables()) out.push_back(&t);
  for (const auto& layer : layers_) {
    for (const auto& p : layer.params()) out.push_back(&p);
  }
  return out;
}

template <typename T>
std::vector<std::string> Network<T>::ParameterNames() const {
  std::vector<std::string> names;
  const std::string variant(VariantName(embedding_.variant()));
  for (std::size_t i = 0; i < embedding_.tables().size(); ++i) {
    names.push_back("embedding." + variant + "." + std::to_string(i));
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    for (const auto& p : layers_[l].param_names()) {
      names.push_back("layer" + std::to_string(l) + "." +
                      std::string(LayerKindName(layers_[l].kind())) + "." + p);
    }
  }
  return names;
}

template <typename T>
std::vector<Tensor<T>> Network<T>::ZeroGradients() const {
  std::vector<Tensor<T>> grads;
  for (const Tensor<T>* p : Parameters()) grads.emplace_back(p->shape());
  return grads;
}

template <typename T>
std::size_t Network<T>::ParameterCount() const {
  std::size_t n = 0;
  for (const Tensor<T>* p : Parameters()) n += p->size();
  return n;
}

template <typename T>
std::size_t Network<T>::FirstLayerGrad(std::size_t layer) const {
  std::size_t offset = embedding_.tables().size();
  for (std::size_t l = 0; l < layer; ++l) offset += layers_[l].params().size();
  return offset;
}

template <typename T>
Tensor<T> Network<T>::EncodeChunk(const Tensor<T>& chunk, ChunkTrace<T>& trace) const {
  trace.inputs.assign(encoder_depth_, Tensor<T>());
  trace.caches.assign(encoder_depth_, LayerCache<T>());
  Tensor<T> x = chunk;
  for (std::size_t l = 0; l < encoder_depth_; ++l) {
    trace.inputs[l] = x;
    x = layers_[l].Forward(trace.inputs[l], trace.caches[l]);
  }
  trace.feature = x;
  return x;
}

template <typename T>
Tensor<T> Network<T>::ChopAndPool(const Tensor<T>& embedded, std::size_t chop_count,
                                  ForwardTrace<T>& trace, Exec exec) const {
  const auto bounds = ChopBounds(embedded.rows(), chop_count);
  trace.chunks.assign(bounds.size(), ChunkTrace<T>());
  ParallelFor(bounds.size(), exec == Exec::kParallel, [&](std::size_t c) {
    ChunkTrace<T>& chunk = trace.chunks[c];
    chunk.begin = bounds[c].first;
    chunk.end = bounds[c].second;
    EncodeChunk(SliceRows(embedded, chunk.begin, chunk.end), chunk);
  });

  const std::size_t width = encoder_width();
  Tensor<T> pooled = trace.chunks[0].feature;
  trace.pool_source.assign(width, 0);
  for (std::size_t c = 1; c < trace.chunks.size(); ++c) {
    const Tensor<T>& f = trace.chunks[c].feature;
    for (std::size_t k = 0; k < width; ++k) {
      if (f[k] > pooled[k]) {
        pooled[k] = f[k];
        trace.pool_source[k] = c;
      }
    }
  }
  return pooled;
}

template <typename T>
T Network<T>::Forward(const SymbolSequence& input, ForwardTrace<T>& trace,
                      Exec exec) const {
  trace.embedded = embedding_.Forward(input, trace.embedding);
  trace.pooled = ChopAndPool(trace.embedded, config_.chop_count, trace, exec);
  const std::size_t head_end = layers_.size() - 1;
  trace.head_inputs.assign(head_end - encoder_depth_, Tensor<T>());
  trace.head_caches.assign(head_end - encoder_depth_, LayerCache<T>());
  Tensor<T> x = trace.pooled;
  for (std::size_t l = encoder_depth_; l < head_end; ++l) {
    trace.head_inputs[l - encoder_depth_] = x;
    x = layers_[l].Forward(trace.head_inputs[l - encoder_depth_],
                           trace.head_caches[l - encoder_depth_]);
  }
  trace.logit = x[0];
  trace.probability = Sigmoid(trace.logit);
  return trace.probability;
}

template <typename T>
T Network<T>::Predict(const SymbolSequence& input, Exec exec) const {
  ForwardTrace<T> trace;
  return Forward(input, trace, exec);
}

template <typename T>
void Network<T>::EncoderBackward(const Tensor<T>& /*embedded*/, const ChunkTrace<T>& chunk,
                                 const Tensor<T>& d_feature, std::span<Tensor<T>> grads,
                                 Tensor<T>& d_embedded) const {
  // `grads` covers encoder parameters only, in layer order.
  std::vector<std::size_t> offsets(encoder_depth_ + 1, 0);
  for (std::size_t l = 0; l < encoder_depth_; ++l) {
    offsets[l + 1] = offsets[l] + layers_[l].params().size();
  }
  Tensor<T> g = d_feature;
  for (std::size_t l = encoder_depth_; l-- > 0;) {
    g = layers_[l].Backward(g, chunk.inputs[l], chunk.caches[l],
                            grads.subspan(offsets[l], offsets[l + 1] - offsets[l]));
  }
  for (std::size_t n = chunk.begin; n < chunk.end; ++n) {
    const auto src = g.row(n - chunk.begin);
    auto dst = d_embedded.row(n);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

template <typename T>
void Network<T>::Backward(const SymbolSequence& input, const ForwardTrace<T>& trace,
                          T dlogit, std::span<Tensor<T>> grads, Exec exec) const {
  const std::size_t n_tables = embedding_.tables().size();
  const std::size_t head_end = layers_.size() - 1;

  Tensor<T> g(1, 1);
  g[0] = dlogit;
  for (std::size_t l = head_end; l-- > encoder_depth_;) {
    const std::size_t h = l - encoder_depth_;
    const std::size_t first = FirstLayerGrad(l);
    g = layers_[l].Backward(g, trace.head_inputs[h], trace.head_caches[h],
                            grads.subspan(first, layers_[l].params().size()));
  }

  const std::size_t encoder_params = FirstLayerGrad(encoder_depth_) - n_tables;
  std::span<Tensor<T>> encoder_grads = grads.subspan(n_tables, encoder_params);
  Tensor<T> d_embedded(trace.embedded.rows(), trace.embedded.cols());
  const std::size_t chunks = trace.chunks.size();

  if (chunks == 1) {
    EncoderBackward(trace.embedded, trace.chunks[0], g, encoder_grads, d_embedded);
  } else {
    // Per-chunk buffers reduced in chunk order keep the result independent of
    // the execution policy.
    std::vector<std::vector<Tensor<T>>> local(chunks);
    std::vector<bool> active(chunks, false);
    for (std::size_t k = 0; k < trace.pool_source.size(); ++k) {
      active[trace.pool_source[k]] = true;
    }
    ParallelFor(chunks, exec == Exec::kParallel, [&](std::size_t c) {
      if (!active[c]) return;
      Tensor<T> d_feature(1, g.cols());
      for (std::size_t k = 0; k < g.cols(); ++k) {
        if (trace.pool_source[k] == c) d_feature[k] = g[k];
      }
      for (const Tensor<T>& eg : encoder_grads) local[c].emplace_back(eg.shape());
      EncoderBackward(trace.embedded, trace.chunks[c], d_feature, local[c], d_embedded);
    });
    for (std::size_t c = 0; c < chunks; ++c) {
      if (!active[c]) continue;
      for (std::size_t i = 0; i < encoder_params; ++i) encoder_grads[i] += local[c][i];
    }
  }
  embedding_.Backward(d_embedded, input, trace.embedding, grads.subspan(0, n_tables));
}

template <typename T>
T Network<T>::Accumulate(const SymbolSequence& input, int target, T scale,
                         std::span<Tensor<T>> grads, Exec exec) const {
  ForwardTrace<T> trace;
  const T p = Forward(input, trace, exec);
  const T term = BceTerm(target, p);
  Backward(input, trace, scale * (p - static_cast<T>(target)), grads, exec);
  return term;
}

template class Network<float>;
template class Network<double>;

}  // namespace symev
