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

#include "symev/kernels.hpp"

#include <omp.h>

#include "symev/errors.hpp"
#include "symev/parallel.hpp"

namespace symev {

int MaxThreads() { return omp_get_max_threads(); }

namespace {

template <typename T>
void ResetGradients(const Network<T>& net, std::vector<Tensor<T>>& grads) {
  if (grads.empty()) {
    grads = net.ZeroGradients();
    return;
  }
  for (auto& g : grads) g.SetZero();
}

template <typename T>
BatchGradientResult<T> BatchGradientImpl(const Network<T>& net,
                                         std::span<const LabeledSample> samples,
                                         std::span<const std::size_t> batch,
                                         T normalizer, std::vector<Tensor<T>>& grads,
                                         bool parallel) {
  if (!(normalizer > T(0))) Fail(ErrorCode::kConfig, "gradient normalizer must be positive");
  ResetGradients(net, grads);
  BatchGradientResult<T> result;
  const std::size_t n = batch.size();
  std::vector<T> terms(n, T(0));
  if (n == 1) {
    const LabeledSample& s = samples[batch[0]];
    const T w = static_cast<T>(s.weight);
    terms[0] = net.Accumulate(s.input, s.target, w / normalizer, grads);
  } else {
    std::vector<std::vector<Tensor<T>>> local(n);
    ParallelFor(n, parallel, [&](std::size_t i) {
      const LabeledSample& s = samples[batch[i]];
      local[i] = net.ZeroGradients();
      terms[i] = net.Accumulate(s.input, s.target, static_cast<T>(s.weight) / normalizer,
                                local[i]);
    });
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < grads.size(); ++k) grads[k] += local[i][k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const T w = static_cast<T>(samples[batch[i]].weight);
    result.weighted_loss += w * terms[i];
    result.weight += w;
  }
  return result;
}

template <typename T>
std::vector<T> PredictImpl(const Network<T>& net, std::span<const LabeledSample> samples,
                           bool parallel) {
  std::vector<T> out(samples.size());
  ParallelFor(samples.size(), parallel,
              [&](std::size_t i) { out[i] = net.Predict(samples[i].input); });
  return out;
}

}  // namespace

namespace serial {

template <typename T>
std::vector<T> PredictBatch(const Network<T>& net, std::span<const LabeledSample> samples) {
  return PredictImpl(net, samples, false);
}

template <typename T>
BatchGradientResult<T> BatchGradient(const Network<T>& net,
                                     std::span<const LabeledSample> samples,
                                     std::span<const std::size_t> batch, T normalizer,
                                     std::vector<Tensor<T>>& grads) {
  return BatchGradientImpl(net, samples, batch, normalizer, grads, false);
}

}  // namespace serial

namespace omp {

template <typename T>
std::vector<T> PredictBatch(const Network<T>& net, std::span<const LabeledSample> samples) {
  return PredictImpl(net, samples, true);
}

template <typename T>
BatchGradientResult<T> BatchGradient(const Network<T>& net,
                                     std::span<const LabeledSample> samples,
                                     std::span<const std::size_t> batch, T normalizer,
                                     std::vector<Tensor<T>>& grads) {
  return BatchGradientImpl(net, samples, batch, normalizer, grads, true);
}

}  // namespace omp

#define SYMEV_INSTANTIATE_KERNELS(NS, T)                                          \
  template std::vector<T> NS::PredictBatch<T>(const Network<T>&,                  \
                                              std::span<const LabeledSample>);    \
  template BatchGradientResult<T> NS::BatchGradient<T>(                           \
      const Network<T>&, std::span<const LabeledSample>, std::span<const std::size_t>, \
      T, std::vector<Tensor<T>>&);

SYMEV_INSTANTIATE_KERNELS(serial, float)
SYMEV_INSTANTIATE_KERNELS(serial, double)
SYMEV_INSTANTIATE_KERNELS(omp, float)
SYMEV_INSTANTIATE_KERNELS(omp, double)

#undef SYMEV_INSTANTIATE_KERNELS

}  // namespace symev
