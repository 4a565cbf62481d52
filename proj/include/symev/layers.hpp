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

// Closed set of sequence layers with hand-written backward passes.
//
// Every layer maps a [steps, features] tensor to another one. Recurrent
// layers without `return_sequences` and the global max pool collapse time and
// emit a single row.

#ifndef SYMEV_LAYERS_HPP_
#define SYMEV_LAYERS_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symev/tensor.hpp"

namespace symev {

enum class LayerKind { kLstm, kIrnn, kConv1d, kMaxPool1d, kDense, kSigmoid, kGlobalMaxPool };
enum class Activation { kLinear, kRelu, kTanh };

std::string_view LayerKindName(LayerKind kind);
LayerKind ParseLayerKind(std::string_view name);
std::string_view ActivationName(Activation act);
Activation ParseActivation(std::string_view name);

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  std::size_t units = 0;         // hidden units, dense outputs, conv filters
  std::size_t kernel = 0;        // conv filter length
  std::size_t size = 0;          // max-pool window
  std::size_t stride = 1;        // conv / max-pool
  Activation activation = Activation::kLinear;  // dense, conv
  bool return_sequences = false; // lstm, irnn

  bool operator==(const LayerSpec&) const = default;
};

// Intermediate values kept by Forward for Backward.
template <typename T>
struct LayerCache {
  std::vector<Tensor<T>> tensors;
  std::vector<std::size_t> indices;
};

template <typename T>
class Layer {
 public:
  Layer() = default;
  Layer(const LayerSpec& spec, std::size_t input_dim);

  const LayerSpec& spec() const { return spec_; }
  LayerKind kind() const { return spec_.kind; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  // False when the layer emits one row regardless of input length.
  bool keeps_time() const;
  // Shortest input length accepted.
  std::size_t min_steps() const;

  std::vector<Tensor<T>>& params() { return params_; }
  const std::vector<Tensor<T>>& params() const { return params_; }
  std::vector<std::string> param_names() const;

  void Initialize(std::mt19937_64& rng);

  Tensor<T> Forward(const Tensor<T>& in, LayerCache<T>& cache) const;
  // Accumulates parameter gradients into `grads` (same layout as params())
  // and returns the gradient with respect to `in`.
  Tensor<T> Backward(const Tensor<T>& grad_out, const Tensor<T>& in,
                     const LayerCache<T>& cache, std::span<Tensor<T>> grads) const;

 private:
  LayerSpec spec_;
  std::size_t input_dim_ = 0;
  std::size_t output_dim_ = 0;
  std::vector<Tensor<T>> params_;
};

// Individual kernels, exposed for unit tests.
template <typename T>
Tensor<T> LstmForward(const Tensor<T>& in, const Tensor<T>& wx, const Tensor<T>& wh,
                      const Tensor<T>& b, LayerCache<T>& cache);
template <typename T>
Tensor<T> IrnnForward(const Tensor<T>& in, const Tensor<T>& wx, const Tensor<T>& wh,
                      const Tensor<T>& b, LayerCache<T>& cache,
                      std::span<const T> h0 = {});
template <typename T>
Tensor<T> Conv1dForward(const Tensor<T>& in, const Tensor<T>& filters,
                        const Tensor<T>& bias, std::size_t kernel, std::size_t stride);
template <typename T>
Tensor<T> MaxPool1d(const Tensor<T>& in, std::size_t size, std::size_t stride,
                    std::vector<std::size_t>* argmax = nullptr);

}  // namespace symev

#endif  // SYMEV_LAYERS_HPP_
