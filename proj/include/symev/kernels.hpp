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

// Sample-parallel kernels and their serial references.
//
// Both versions of a kernel return bitwise-identical results: work is split
// per sample and any reduction runs in sample order after the parallel loop.

#ifndef SYMEV_KERNELS_HPP_
#define SYMEV_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "symev/labeling.hpp"
#include "symev/network.hpp"

namespace symev {

// Per-sample gradient scales: scale_i = weight_i / normalizer.
template <typename T>
struct BatchGradientResult {
  T weighted_loss = T(0);   // sum_i weight_i * bce_i
  T weight = T(0);          // sum_i weight_i
};

namespace serial {

template <typename T>
std::vector<T> PredictBatch(const Network<T>& net,
                            std::span<const LabeledSample> samples);

template <typename T>
BatchGradientResult<T> BatchGradient(const Network<T>& net,
                                     std::span<const LabeledSample> samples,
                                     std::span<const std::size_t> batch,
                                     T normalizer, std::vector<Tensor<T>>& grads);

}  // namespace serial

namespace omp {

template <typename T>
std::vector<T> PredictBatch(const Network<T>& net,
                            std::span<const LabeledSample> samples);

template <typename T>
BatchGradientResult<T> BatchGradient(const Network<T>& net,
                                     std::span<const LabeledSample> samples,
                                     std::span<const std::size_t> batch,
                                     T normalizer, std::vector<Tensor<T>>& grads);

}  // namespace omp

template <typename T>
std::vector<T> PredictBatch(const Network<T>& net,
                            std::span<const LabeledSample> samples, Exec exec) {
  return exec == Exec::kParallel ? omp::PredictBatch(net, samples)
                                 : serial::PredictBatch(net, samples);
}

template <typename T>
BatchGradientResult<T> BatchGradient(const Network<T>& net,
                                     std::span<const LabeledSample> samples,
                                     std::span<const std::size_t> batch, T normalizer,
                                     std::vector<Tensor<T>>& grads, Exec exec) {
  return exec == Exec::kParallel
             ? omp::BatchGradient(net, samples, batch, normalizer, grads)
             : serial::BatchGradient(net, samples, batch, normalizer, grads);
}

}  // namespace symev

#endif  // SYMEV_KERNELS_HPP_
