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

#include "symev/loss.hpp"

#include <algorithm>
#include <cmath>

#include "symev/errors.hpp"

namespace symev {

template <typename T>
T BceTerm(int target, T prediction) {
  const T eps = static_cast<T>(kProbabilityClamp);
  const T p = std::clamp(prediction, eps, T(1) - eps);
  return target == 1 ? -std::log(p) : -std::log(T(1) - p);
}

template <typename T>
T WeightedBce(std::span<const int> targets, std::span<const T> predictions,
              std::span<const T> weights) {
  if (targets.size() != predictions.size() || targets.size() != weights.size()) {
    Fail(ErrorCode::kShapeMismatch, "targets, predictions and weights differ in length");
  }
  T total = T(0);
  T weight_sum = T(0);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    total += weights[t] * BceTerm(targets[t], predictions[t]);
    weight_sum += weights[t];
  }
  if (!(weight_sum > T(0))) return T(0);
  return total / weight_sum;
}

template float BceTerm<float>(int, float);
template double BceTerm<double>(int, double);
template float WeightedBce<float>(std::span<const int>, std::span<const float>,
                                  std::span<const float>);
template double WeightedBce<double>(std::span<const int>, std::span<const double>,
                                    std::span<const double>);

}  // namespace symev
