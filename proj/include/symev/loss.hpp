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

#ifndef SYMEV_LOSS_HPP_
#define SYMEV_LOSS_HPP_

#include <span>

namespace symev {

inline constexpr double kProbabilityClamp = 1e-7;

// Weighted binary cross entropy, normalised by the total weight:
//   -sum_t w_t (y_t log p_t + (1 - y_t) log(1 - p_t)) / sum_t w_t
// with p clamped to [1e-7, 1 - 1e-7].
template <typename T>
T WeightedBce(std::span<const int> targets, std::span<const T> predictions,
              std::span<const T> weights);

// Unweighted per-sample term of the above.
template <typename T>
T BceTerm(int target, T prediction);

}  // namespace symev

#endif  // SYMEV_LOSS_HPP_
