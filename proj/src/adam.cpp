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

#include "symev/adam.hpp"

#include <cmath>

#include "symev/errors.hpp"

namespace symev {

template <typename T>
AdamState<T> MakeAdamState(std::span<const Tensor<T>* const> params) {
  AdamState<T> state;
  for (const Tensor<T>* p : params) {
    state.m.emplace_back(p->shape());
    state.v.emplace_back(p->shape());
  }
  return state;
}

template <typename T>
void AdamStep(std::span<Tensor<T>* const> params, std::span<const Tensor<T>> grads,
              AdamState<T>& state, const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    Fail(ErrorCode::kShapeMismatch, "ADAM parameter, gradient and state counts differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const T lr = static_cast<T>(cfg.learning_rate);
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  const T eps = static_cast<T>(cfg.epsilon);
  const T correction1 = static_cast<T>(1.0 - std::pow(cfg.beta1, t));
  const T correction2 = static_cast<T>(1.0 - std::pow(cfg.beta2, t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor<T>& p = *params[k];
    const Tensor<T>& g = grads[k];
    if (!p.SameShape(g)) Fail(ErrorCode::kShapeMismatch, "ADAM gradient shape");
    Tensor<T>& m = state.m[k];
    Tensor<T>& v = state.v[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      const T m_hat = m[i] / correction1;
      const T v_hat = v[i] / correction2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

template AdamState<float> MakeAdamState<float>(std::span<const Tensor<float>* const>);
template AdamState<double> MakeAdamState<double>(std::span<const Tensor<double>* const>);
template void AdamStep<float>(std::span<Tensor<float>* const>, std::span<const Tensor<float>>,
                              AdamState<float>&, const AdamConfig&);
template void AdamStep<double>(std::span<Tensor<double>* const>,
                               std::span<const Tensor<double>>, AdamState<double>&,
                               const AdamConfig&);

}  // namespace symev
