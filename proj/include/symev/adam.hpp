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

#ifndef SYMEV_ADAM_HPP_
#define SYMEV_ADAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "symev/tensor.hpp"

namespace symev {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m;
  std::vector<Tensor<T>> v;
  std::uint64_t step = 0;
};

template <typename T>
AdamState<T> MakeAdamState(std::span<const Tensor<T>* const> params);

// One bias-corrected ADAM update of every parameter tensor.
template <typename T>
void AdamStep(std::span<Tensor<T>* const> params, std::span<const Tensor<T>> grads,
              AdamState<T>& state, const AdamConfig& cfg);

}  // namespace symev

#endif  // SYMEV_ADAM_HPP_
