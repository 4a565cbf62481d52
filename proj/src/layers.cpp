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

#include "symev/layers.hpp"

#include <cmath>
#include <limits>

#include "symev/errors.hpp"

namespace symev {

std::string_view LayerKindName(LayerKind kind) {
  switch (kind) {
    case LayerKind::kLstm: return "lstm";
    case LayerKind::kIrnn: return "irnn";
    case LayerKind::kConv1d: return "conv1d";
    case LayerKind::kMaxPool1d: return "maxpool1d";
    case LayerKind::kDense: return "dense";
    case LayerKind::kSigmoid: return "sigmoid";
    case LayerKind::kGlobalMaxPool: return "global_maxpool";
  }
  return "?";
}

LayerKind ParseLayerKind(std::string_view name) {
  for (LayerKind k : {LayerKind::kLstm, LayerKind::kIrnn, LayerKind::kConv1d,
                      LayerKind::kMaxPool1d, LayerKind::kDense, LayerKind::kSigmoid,
                      LayerKind::kGlobalMaxPool}) {
    if (LayerKindName(k) == name) return k;
  }
  Fail(ErrorCode::kConfig, "unknown layer kind '" + std::string(name) + "'");
}

std::string_view ActivationName(Activation act) {
  switch (act) {
    case Activation::kLinear: return "linear";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
  }
  return "?";
}

Activation ParseActivation(std::string_view name) {
  if (name == "linear" || name.empty()) return Activation::kLinear;
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  Fail(ErrorCode::kConfig, "unknown activation '" + std::string(name) + "'");
}

namespace {

template <typename T>
void ApplyActivation(Activation act, Tensor<T>& t) {
  switch (act) {
    case Activation::kLinear: return;
    case Activation::kRelu:
      for (auto& v : t.values()) v = v > T(0) ? v : T(0);
      return;
    case Activation::kTanh:
      for (auto& v : t.values()) v = std::tanh(v);
      return;
  }
}

// grad *= act'(.) given the activated output.
template <typename T>
void ActivationBackward(Activation act, const Tensor<T>& activated, Tensor<T>& grad) {
  switch (act) {
    case Activation::kLinear: return;
    case Activation::kRelu:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!(activated[i] > T(0))) grad[i] = T(0);
      }
      return;
    case Activation::kTanh:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] *= T(1) - activated[i] * activated[i];
      }
      return;
  }
}

template <typename T>
void UniformFill(Tensor<T>& t, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-limit, limit);
  for (auto& v : t.values()) v = static_cast<T>(u(rng));
}

std::size_t PooledLength(std::size_t length, std::size_t window, std::size_t stride) {
  return (length - window) / stride + 1;
}

void CheckLength(std::size_t length, std::size_t needed, std::string_view what) {
  if (length < needed) {
    Fail(ErrorCode::kSequenceTooShort,
         std::string(what) + " needs at least " + std::to_string(needed) +
             " steps, got " + std::to_string(length));
  }
}

}  // namespace

template <typename T>
Tensor<T> LstmForward(const Tensor<T>& in, const Tensor<T>& wx, const Tensor<T>& wh,
                      const Tensor<T>& b, LayerCache<T>& cache) {
  const std::size_t steps = in.rows();
  const std::size_t d = in.cols();
  const std::size_t h = wh.cols();
  if (wx.rows() != 4 * h || wx.cols() != d || wh.rows() != 4 * h || b.size() != 4 * h) {
    Fail(ErrorCode::kShapeMismatch, "LSTM parameters do not match input width " +
                                        std::to_string(d));
  }
  cache.tensors.assign(4, Tensor<T>());
  Tensor<T>& gates = cache.tensors[0];
  Tensor<T>& cell = cache.tensors[1];
  Tensor<T>& tanh_cell = cache.tensors[2];
  Tensor<T>& hidden = cache.tensors[3];
  gates = Tensor<T>(steps, 4 * h);
  cell = Tensor<T>(steps, h);
  tanh_cell = Tensor<T>(steps, h);
  hidden = Tensor<T>(steps, h);

  std::vector<T> h_prev(h, T(0));
  std::vector<T> c_prev(h, T(0));
  for (std::size_t n = 0; n < steps; ++n) {
    T* z = gates.row(n).data();
    for (std::size_t r = 0; r < 4 * h; ++r) z[r] = b[r];
    MatVecAccumulate(wx.data(), 4 * h, d, in.row(n).data(), z);
    MatVecAccumulate(wh.data(), 4 * h, h, h_prev.data(), z);
    for (std::size_t k = 0; k < h; ++k) {
      const T i = Sigmoid(z[k]);
      const T f = Sigmoid(z[h + k]);
      const T g = std::tanh(z[2 * h + k]);
      const T o = Sigmoid(z[3 * h + k]);
      z[k] = i;
      z[h + k] = f;
      z[2 * h + k] = g;
      z[3 * h + k] = o;
      const T c = f * c_prev[k] + i * g;
      const T tc = std::tanh(c);
      cell(n, k) = c;
      tanh_cell(n, k) = tc;
      hidden(n, k) = o * tc;
    }
    for (std::size_t k = 0; k < h; ++k) {
      h_prev[k] = hidden(n, k);
      c_prev[k] = cell(n, k);
    }
  }
  return hidden;
}

template <typename T>
Tensor<T> IrnnForward(const Tensor<T>& in, const Tensor<T>& wx, const Tensor<T>& wh,
                      const Tensor<T>& b, LayerCache<T>& cache, std::span<const T> h0) {
  const std::size_t steps = in.rows();
  const std::size_t d = in.cols();
  const std::size_t h = wh.cols();
  if (wx.rows() != h || wx.cols() != d || wh.rows() != h || b.size() != h ||
      (!h0.empty() && h0.size() != h)) {
    Fail(ErrorCode::kShapeMismatch, "iRNN parameters do not match input width " +
                                        std::to_string(d));
  }
  cache.tensors.assign(2, Tensor<T>());
  Tensor<T>& hidden = cache.tensors[0];
  Tensor<T>& initial = cache.tensors[1];
  hidden = Tensor<T>(steps, h);
  initial = Tensor<T>(1, h);
  for (std::size_t k = 0; k < h0.size(); ++k) initial[k] = h0[k];

  std::vector<T> z(h);
  const T* prev = initial.data();
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t k = 0; k < h; ++k) z[k] = b[k];
    MatVecAccumulate(wx.data(), h, d, in.row(n).data(), z.data());
    MatVecAccumulate(wh.data(), h, h, prev, z.data());
    T* out = hidden.row(n).data();
    for (std::size_t k = 0; k < h; ++k) out[k] = z[k] > T(0) ? z[k] : T(0);
    prev = out;
  }
  return hidden;
}

template <typename T>
Tensor<T> Conv1dForward(const Tensor<T>& in, const Tensor<T>& filters,
                        const Tensor<T>& bias, std::size_t kernel, std::size_t stride) {
  const std::size_t d = in.cols();
  const std::size_t f = filters.rows();
  if (filters.cols() != kernel * d || bias.size() != f || stride == 0) {
    Fail(ErrorCode::kShapeMismatch, "conv1d filters do not match input width");
  }
  CheckLength(in.rows(), kernel, "conv1d");
  const std::size_t out_len = PooledLength(in.rows(), kernel, stride);
  Tensor<T> out(out_len, f);
  for (std::size_t p = 0; p < out_len; ++p) {
    T* y = out.row(p).data();
    for (std::size_t r = 0; r < f; ++r) y[r] = bias[r];
    // Rows p*stride .. p*stride+kernel-1 are contiguous in row-major storage.
    MatVecAccumulate(filters.data(), f, kernel * d, in.row(p * stride).data(), y);
  }
  return out;
}

template <typename T>
Tensor<T> MaxPool1d(const Tensor<T>& in, std::size_t size, std::size_t stride,
                    std::vector<std::size_t>* argmax) {
  if (size == 0 || stride == 0) Fail(ErrorCode::kConfig, "max-pool size and stride must be positive");
  CheckLength(in.rows(), size, "maxpool1d");
  const std::size_t d = in.cols();
  const std::size_t out_len = PooledLength(in.rows(), size, stride);
  Tensor<T> out(out_len, d);
  if (argmax) argmax->assign(out_len * d, 0);
  for (std::size_t p = 0; p < out_len; ++p) {
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t best = p * stride;
      for (std::size_t j = 1; j < size; ++j) {
        if (in(p * stride + j, c) > in(best, c)) best = p * stride + j;
      }
      out(p, c) = in(best, c);
      if (argmax) (*argmax)[p * d + c] = best;
    }
  }
  return out;
}

template <typename T>
Layer<T>::Layer(const LayerSpec& spec, std::size_t input_dim)
    : spec_(spec), input_dim_(input_dim) {
  if (input_dim == 0) Fail(ErrorCode::kConfig, "layer input width must be positive");
  const std::size_t u = spec.units;
  auto need_units = [&] {
    if (u == 0) {
      Fail(ErrorCode::kConfig, std::string(LayerKindName(spec.kind)) + " needs units > 0");
    }
  };
  switch (spec.kind) {
    case LayerKind::kLstm:
      need_units();
      output_dim_ = u;
      params_ = {Tensor<T>(4 * u, input_dim), Tensor<T>(4 * u, u),
                 Tensor<T>(std::vector<std::size_t>{4 * u})};
      break;
    case LayerKind::kIrnn:
      need_units();
      output_dim_ = u;
      params_ = {Tensor<T>(u, input_dim), Tensor<T>(u, u),
                 Tensor<T>(std::vector<std::size_t>{u})};
      break;
    case LayerKind::kConv1d:
      need_units();
      if (spec.kernel == 0 || spec.stride == 0) {
        Fail(ErrorCode::kConfig, "conv1d needs kernel > 0 and stride > 0");
      }
      output_dim_ = u;
      params_ = {Tensor<T>(u, spec.kernel * input_dim),
                 Tensor<T>(std::vector<std::size_t>{u})};
      break;
    case LayerKind::kDense:
      need_units();
      output_dim_ = u;
      params_ = {Tensor<T>(u, input_dim), Tensor<T>(std::vector<std::size_t>{u})};
      break;
    case LayerKind::kMaxPool1d:
      if (spec.size == 0 || spec.stride == 0) {
        Fail(ErrorCode::kConfig, "maxpool1d needs size > 0 and stride > 0");
      }
      output_dim_ = input_dim;
      break;
    case LayerKind::kSigmoid:
    case LayerKind::kGlobalMaxPool:
      output_dim_ = input_dim;
      break;
  }
}

template <typename T>
bool Layer<T>::keeps_time() const {
  switch (spec_.kind) {
    case LayerKind::kLstm:
    case LayerKind::kIrnn:
      return spec_.return_sequences;
    case LayerKind::kGlobalMaxPool:
      return false;
    default:
      return true;
  }
}

template <typename T>
std::size_t Layer<T>::min_steps() const {
  switch (spec_.kind) {
    case LayerKind::kConv1d: return spec_.kernel;
    case LayerKind::kMaxPool1d: return spec_.size;
    default: return 1;
  }
}

template <typename T>
std::vector<std::string> Layer<T>::param_names() const {
  switch (spec_.kind) {
    case LayerKind::kLstm:
    case LayerKind::kIrnn:
      return {"wx", "wh", "b"};
    case LayerKind::kConv1d:
    case LayerKind::kDense:
      return {"w", "b"};
    default:
      return {};
  }
}

template <typename T>
void Layer<T>::Initialize(std::mt19937_64& rng) {
  const double in = static_cast<double>(input_dim_);
  const double out = static_cast<double>(output_dim_);
  switch (spec_.kind) {
    case LayerKind::kLstm: {
      const double limit = 1.0 / std::sqrt(out);
      UniformFill(params_[0], limit, rng);
      UniformFill(params_[1], limit, rng);
      params_[2].SetZero();
      // Forget-gate block starts open.
      for (std::size_t k = 0; k < spec_.units; ++k) params_[2][spec_.units + k] = T(1);
      break;
    }
    case LayerKind::kIrnn:
      UniformFill(params_[0], std::sqrt(6.0 / (in + out)), rng);
      params_[1].SetZero();
      for (std::size_t k = 0; k < spec_.units; ++k) params_[1](k, k) = T(1);
      params_[2].SetZero();
      break;
    case LayerKind::kConv1d:
      UniformFill(params_[0],
                  std::sqrt(6.0 / (static_cast<double>(spec_.kernel) * in + out)), rng);
      params_[1].SetZero();
      break;
    case LayerKind::kDense:
      UniformFill(params_[0], std::sqrt(6.0 / (in + out)), rng);
      params_[1].SetZero();
      break;
    default:
      break;
  }
}

template <typename T>
Tensor<T> Layer<T>::Forward(const Tensor<T>& in, LayerCache<T>& cache) const {
  if (in.cols() != input_dim_ || in.rank() != 2) {
    Fail(ErrorCode::kShapeMismatch,
         std::string(LayerKindName(spec_.kind)) + " expects width " +
             std::to_string(input_dim_) + ", got " + ShapeString(in.shape()));
  }
  if (in.rows() == 0) Fail(ErrorCode::kEmptySequence, "empty input to layer");
  switch (spec_.kind) {
    case LayerKind::kLstm:
    case LayerKind::kIrnn: {
      Tensor<T> hidden = spec_.kind == LayerKind::kLstm
                             ? LstmForward(in, params_[0], params_[1], params_[2], cache)
                             : IrnnForward(in, params_[0], params_[1], params_[2], cache);
      if (spec_.return_sequences) return hidden;
      Tensor<T> last(1, output_dim_);
      const auto row = hidden.row(hidden.rows() - 1);
      std::copy(row.begin(), row.end(), last.data());
      return last;
    }
    case LayerKind::kConv1d: {
      Tensor<T> out = Conv1dForward(in, params_[0], params_[1], spec_.kernel, spec_.stride);
      ApplyActivation(spec_.activation, out);
      cache.tensors = {out};
      return out;
    }
    case LayerKind::kMaxPool1d:
      return MaxPool1d(in, spec_.size, spec_.stride, &cache.indices);
    case LayerKind::kGlobalMaxPool:
      return MaxPool1d(in, in.rows(), 1, &cache.indices);
    case LayerKind::kDense: {
      Tensor<T> out(in.rows(), output_dim_);
      for (std::size_t n = 0; n < in.rows(); ++n) {
        T* y = out.row(n).data();
        for (std::size_t r = 0; r < output_dim_; ++r) y[r] = params_[1][r];
        MatVecAccumulate(params_[0].data(), output_dim_, input_dim_, in.row(n).data(), y);
      }
      ApplyActivation(spec_.activation, out);
      cache.tensors = {out};
      return out;
    }
    case LayerKind::kSigmoid: {
      Tensor<T> out = in;
      for (auto& v : out.values()) v = Sigmoid(v);
      cache.tensors = {out};
      return out;
    }
  }
  Fail(ErrorCode::kConfig, "unknown layer kind");
}

template <typename T>
Tensor<T> Layer<T>::Backward(const Tensor<T>& grad_out, const Tensor<T>& in,
                             const LayerCache<T>& cache,
                             std::span<Tensor<T>> grads) const {
  if (grads.size() != params_.size()) {
    Fail(ErrorCode::kShapeMismatch, "gradient buffers do not match layer parameters");
  }
  const std::size_t steps = in.rows();
  Tensor<T> grad_in(steps, input_dim_);
  switch (spec_.kind) {
    case LayerKind::kLstm: {
      const std::size_t h = output_dim_;
      const std::size_t d = input_dim_;
      const Tensor<T>& gates = cache.tensors[0];
      const Tensor<T>& cell = cache.tensors[1];
      const Tensor<T>& tanh_cell = cache.tensors[2];
      const Tensor<T>& hidden = cache.tensors[3];
      std::vector<T> dh_next(h, T(0)), dc_next(h, T(0)), dz(4 * h), dh(h);
      const std::vector<T> zeros(h, T(0));
      for (std::size_t n = steps; n-- > 0;) {
        for (std::size_t k = 0; k < h; ++k) {
          T up = T(0);
          if (spec_.return_sequences) {
            up = grad_out(n, k);
          } else if (n + 1 == steps) {
            up = grad_out(0, k);
          }
          dh[k] = dh_next[k] + up;
        }
        const T* g = gates.row(n).data();
        const T* c_prev = n > 0 ? cell.row(n - 1).data() : zeros.data();
        const T* h_prev = n > 0 ? hidden.row(n - 1).data() : zeros.data();
        for (std::size_t k = 0; k < h; ++k) {
          const T i = g[k], f = g[h + k], gg = g[2 * h + k], o = g[3 * h + k];
          const T tc = tanh_cell(n, k);
          const T d_o = dh[k] * tc;
          const T dc = dh[k] * o * (T(1) - tc * tc) + dc_next[k];
          dz[k] = dc * gg * i * (T(1) - i);
          dz[h + k] = dc * c_prev[k] * f * (T(1) - f);
          dz[2 * h + k] = dc * i * (T(1) - gg * gg);
          dz[3 * h + k] = d_o * o * (T(1) - o);
          dc_next[k] = dc * f;
        }
        OuterAccumulate(dz.data(), 4 * h, in.row(n).data(), d, grads[0].data());
        OuterAccumulate(dz.data(), 4 * h, h_prev, h, grads[1].data());
        for (std::size_t r = 0; r < 4 * h; ++r) grads[2][r] += dz[r];
        MatTVecAccumulate(params_[0].data(), 4 * h, d, dz.data(), grad_in.row(n).data());
        std::fill(dh_next.begin(), dh_next.end(), T(0));
        MatTVecAccumulate(params_[1].data(), 4 * h, h, dz.data(), dh_next.data());
      }
      return grad_in;
    }
    case LayerKind::kIrnn: {
      const std::size_t h = output_dim_;
      const std::size_t d = input_dim_;
      const Tensor<T>& hidden = cache.tensors[0];
      const Tensor<T>& initial = cache.tensors[1];
      std::vector<T> dh_next(h, T(0)), dz(h);
      for (std::size_t n = steps; n-- > 0;) {
        for (std::size_t k = 0; k < h; ++k) {
          T up = T(0);
          if (spec_.return_sequences) {
            up = grad_out(n, k);
          } else if (n + 1 == steps) {
            up = grad_out(0, k);
          }
          dz[k] = hidden(n, k) > T(0) ? dh_next[k] + up : T(0);
        }
        const T* h_prev = n > 0 ? hidden.row(n - 1).data() : initial.data();
        OuterAccumulate(dz.data(), h, in.row(n).data(), d, grads[0].data());
        OuterAccumulate(dz.data(), h, h_prev, h, grads[1].data());
        for (std::size_t r = 0; r < h; ++r) grads[2][r] += dz[r];
        MatTVecAccumulate(params_[0].data(), h, d, dz.data(), grad_in.row(n).data());
        std::fill(dh_next.begin(), dh_next.end(), T(0));
        MatTVecAccumulate(params_[1].data(), h, h, dz.data(), dh_next.data());
      }
      return grad_in;
    }
    case LayerKind::kConv1d: {
      Tensor<T> g = grad_out;
      ActivationBackward(spec_.activation, cache.tensors[0], g);
      const std::size_t window = spec_.kernel * input_dim_;
      for (std::size_t p = 0; p < g.rows(); ++p) {
        const T* gp = g.row(p).data();
        OuterAccumulate(gp, output_dim_, in.row(p * spec_.stride).data(), window,
                        grads[0].data());
        for (std::size_t r = 0; r < output_dim_; ++r) grads[1][r] += gp[r];
        MatTVecAccumulate(params_[0].data(), output_dim_, window, gp,
                          grad_in.row(p * spec_.stride).data());
      }
      return grad_in;
    }
    case LayerKind::kMaxPool1d:
    case LayerKind::kGlobalMaxPool: {
      const std::size_t d = input_dim_;
      for (std::size_t p = 0; p < grad_out.rows(); ++p) {
        for (std::size_t c = 0; c < d; ++c) {
          grad_in(cache.indices[p * d + c], c) += grad_out(p, c);
        }
      }
      return grad_in;
    }
    case LayerKind::kDense: {
      Tensor<T> g = grad_out;
      ActivationBackward(spec_.activation, cache.tensors[0], g);
      for (std::size_t n = 0; n < steps; ++n) {
        const T* gn = g.row(n).data();
        OuterAccumulate(gn, output_dim_, in.row(n).data(), input_dim_, grads[0].data());
        for (std::size_t r = 0; r < output_dim_; ++r) grads[1][r] += gn[r];
        MatTVecAccumulate(params_[0].data(), output_dim_, input_dim_, gn,
                          grad_in.row(n).data());
      }
      return grad_in;
    }
    case LayerKind::kSigmoid: {
      const Tensor<T>& y = cache.tensors[0];
      for (std::size_t i = 0; i < grad_in.size(); ++i) {
        grad_in[i] = grad_out[i] * y[i] * (T(1) - y[i]);
      }
      return grad_in;
    }
  }
  Fail(ErrorCode::kConfig, "unknown layer kind");
}

std::string ShapeString(const std::vector<std::size_t>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

#define SYMEV_INSTANTIATE_LAYERS(T)                                                  \
  template class Layer<T>;                                                           \
  template Tensor<T> LstmForward<T>(const Tensor<T>&, const Tensor<T>&,              \
                                    const Tensor<T>&, const Tensor<T>&, LayerCache<T>&); \
  template Tensor<T> IrnnForward<T>(const Tensor<T>&, const Tensor<T>&,              \
                                    const Tensor<T>&, const Tensor<T>&, LayerCache<T>&, \
                                    std::span<const T>);                             \
  template Tensor<T> Conv1dForward<T>(const Tensor<T>&, const Tensor<T>&,            \
                                      const Tensor<T>&, std::size_t, std::size_t);   \
  template Tensor<T> MaxPool1d<T>(const Tensor<T>&, std::size_t, std::size_t,        \
                                  std::vector<std::size_t>*);

SYMEV_INSTANTIATE_LAYERS(float)
SYMEV_INSTANTIATE_LAYERS(double)

#undef SYMEV_INSTANTIATE_LAYERS

}  // namespace symev
