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

#ifndef SYMEV_TENSOR_HPP_
#define SYMEV_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "symev/errors.hpp"

namespace symev {

// Dense row-major tensor. Rank-2 tensors double as time-major sequences:
// one row per step.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, T fill = T(0))
      : shape_(std::move(shape)), data_(Count(shape_), fill) {}
  Tensor(std::size_t rows, std::size_t cols, T fill = T(0))
      : Tensor(std::vector<std::size_t>{rows, cols}, fill) {}

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : data_.size() / shape_[0]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  void SetZero() { Fill(T(0)); }

  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }
  bool AllFinite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](T v) { return std::isfinite(v); });
  }

  Tensor& operator+=(const Tensor& other) {
    if (!SameShape(other)) Fail(ErrorCode::kShapeMismatch, "tensor += shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  bool operator==(const Tensor&) const = default;

  static std::size_t Count(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<T> data_;
};

std::string ShapeString(const std::vector<std::size_t>& shape);

// y += W x for W of shape [out, in] (row-major, `in` contiguous).
template <typename T>
inline void MatVecAccumulate(const T* w, std::size_t out, std::size_t in,
                             const T* x, T* y) {
  for (std::size_t r = 0; r < out; ++r) {
    const T* wr = w + r * in;
    T acc = T(0);
    for (std::size_t c = 0; c < in; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// y += W^T g for W of shape [out, in].
template <typename T>
inline void MatTVecAccumulate(const T* w, std::size_t out, std::size_t in,
                              const T* g, T* y) {
  for (std::size_t r = 0; r < out; ++r) {
    const T* wr = w + r * in;
    const T gr = g[r];
    for (std::size_t c = 0; c < in; ++c) y[c] += wr[c] * gr;
  }
}

// dW += g x^T for dW of shape [out, in].
template <typename T>
inline void OuterAccumulate(const T* g, std::size_t out, const T* x,
                            std::size_t in, T* dw) {
  for (std::size_t r = 0; r < out; ++r) {
    T* dr = dw + r * in;
    const T gr = g[r];
    for (std::size_t c = 0; c < in; ++c) dr[c] += gr * x[c];
  }
}

template <typename T>
inline T Sigmoid(T x) {
  if (x >= T(0)) {
    return T(1) / (T(1) + std::exp(-x));
  }
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace symev

#endif  // SYMEV_TENSOR_HPP_
