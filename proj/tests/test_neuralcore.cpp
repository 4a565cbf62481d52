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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "symev/adam.hpp"
#include "symev/errors.hpp"
#include "symev/layers.hpp"
#include "symev/loss.hpp"
#include "symev/network.hpp"

namespace symev {
namespace {

using fixture::Conv;
using fixture::Dense;
using fixture::GlobalPool;
using fixture::Irnn;
using fixture::Lstm;
using fixture::Pool;
using fixture::Sigmoid;

Tensor<double> Random(std::vector<std::size_t> shape, std::mt19937_64& rng, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& x : t.values()) x = u(rng);
  return t;
}

// Max relative error of parameter and input gradients of sum(c * layer(x)).
double LayerGradientError(const LayerSpec& spec, std::size_t input_dim, std::size_t steps,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Layer<double> layer(spec, input_dim);
  for (auto& p : layer.params()) p = Random(p.shape(), rng, 0.7);
  auto x = Random({steps, input_dim}, rng);
  LayerCache<double> cache;
  const auto out = layer.Forward(x, cache);
  const auto c = Random(out.shape(), rng);
  std::vector<Tensor<double>> grads;
  for (const auto& p : layer.params()) grads.emplace_back(p.shape());
  const auto dx = layer.Backward(c, x, cache, grads);
  const auto loss = [&] {
    LayerCache<double> tmp;
    const auto o = layer.Forward(x, tmp);
    double s = 0;
    for (std::size_t i = 0; i < o.size(); ++i) s += c[i] * o[i];
    return s;
  };
  double worst = 0;
  const auto check = [&](double& v, double analytic) {
    const double saved = v;
    v = saved + 1e-5;
    const double up = loss();
    v = saved - 1e-5;
    const double down = loss();
    v = saved;
    const double numeric = (up - down) / 2e-5;
    worst = std::max(worst, std::abs(numeric - analytic) /
                                std::max(std::abs(numeric) + std::abs(analytic), 1e-4));
  };
  for (std::size_t p = 0; p < layer.params().size(); ++p) {
    for (std::size_t k = 0; k < layer.params()[p].size(); ++k) check(layer.params()[p][k], grads[p][k]);
  }
  for (std::size_t k = 0; k < x.size(); ++k) check(x[k], dx[k]);
  return worst;
}

TEST(Lstm, ZeroInputsAndParamsGiveZeroStates) {
  const Tensor<double> in(5, 3);
  const Tensor<double> wx(8, 3), wh(8, 2), b(std::vector<std::size_t>{8});
  LayerCache<double> cache;
  const auto h = LstmForward(in, wx, wh, b, cache);
  ASSERT_EQ(h.shape(), (std::vector<std::size_t>{5, 2}));
  for (double v : h.values()) EXPECT_EQ(v, 0.0);
}

TEST(Lstm, SingleStepCell) {
  // One unit, one input: h = o * tanh(i * g) with zero previous state.
  Tensor<double> in(1, 1, 0.5);
  Tensor<double> wx(4, 1), wh(4, 1), b(std::vector<std::size_t>{4});
  wx[0] = 0.3; wx[1] = -0.2; wx[2] = 0.8; wx[3] = 0.1;
  LayerCache<double> cache;
  const auto h = LstmForward(in, wx, wh, b, cache);
  const auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  const double expected = sig(0.05) * std::tanh(sig(0.15) * std::tanh(0.4));
  EXPECT_NEAR(h[0], expected, 1e-15);
}

TEST(Lstm, InitializationForgetBias) {
  std::mt19937_64 rng(1);
  Layer<double> layer(Lstm(3), 2);
  layer.Initialize(rng);
  const auto& b = layer.params()[2];
  for (std::size_t k = 0; k < 12; ++k) EXPECT_EQ(b[k], (k >= 3 && k < 6) ? 1.0 : 0.0);
  const double limit = 1.0 / std::sqrt(3.0);
  for (double v : layer.params()[0].values()) EXPECT_LE(std::abs(v), limit);
}

TEST(Lstm, GradientCheck) {
  EXPECT_LT(LayerGradientError(Lstm(2), 2, 2, 3), 1e-6);
  EXPECT_LT(LayerGradientError(Lstm(3, true), 2, 4, 4), 1e-6);
}

TEST(Irnn, ZeroInputWeightsAndState) {
  std::mt19937_64 rng(2);
  const auto in = Random({4, 2}, rng);
  const Tensor<double> wx(3, 2), b(std::vector<std::size_t>{3});
  const auto wh = Random({3, 3}, rng);
  LayerCache<double> cache;
  const auto h = IrnnForward(in, wx, wh, b, cache);
  for (double v : h.values()) EXPECT_EQ(v, 0.0);
}

TEST(Irnn, IdentityKeepsPositiveState) {
  const Tensor<double> in(4, 2), wx(3, 2), b(std::vector<std::size_t>{3});
  Tensor<double> wh(3, 3);
  for (std::size_t i = 0; i < 3; ++i) wh(i, i) = 1.0;
  const std::vector<double> h0 = {0.5, 1.5, 2.0};
  LayerCache<double> cache;
  const auto h = IrnnForward(in, wx, wh, b, cache, std::span<const double>(h0));
  for (std::size_t t = 0; t < 4; ++t) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(h(t, k), h0[k]);
  }
}

TEST(Irnn, IdentityInitialization) {
  std::mt19937_64 rng(3);
  Layer<double> layer(Irnn(3), 2);
  layer.Initialize(rng);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(layer.params()[1](i, j), i == j ? 1.0 : 0.0);
  }
  for (double v : layer.params()[2].values()) EXPECT_EQ(v, 0.0);
}

TEST(Irnn, GradientCheck) {
  EXPECT_LT(LayerGradientError(Irnn(3), 2, 4, 5), 1e-6);
  EXPECT_LT(LayerGradientError(Irnn(2, true), 3, 3, 6), 1e-6);
}

TEST(Conv1d, ConstantInputWithOnes) {
  const Tensor<double> in(6, 1, 2.0);
  const Tensor<double> filters(1, 3, 1.0);
  const Tensor<double> bias(std::vector<std::size_t>{1});
  const auto out = Conv1dForward(in, filters, bias, 3, 1);
  ASSERT_EQ(out.rows(), 4u);
  for (double v : out.values()) EXPECT_EQ(v, 6.0);
  EXPECT_EQ(Conv1dForward(in, filters, bias, 3, 2).rows(), 2u);
  const Tensor<double> short_in(2, 1);
  try {
    Conv1dForward(short_in, filters, bias, 3, 1);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSequenceTooShort);
  }
}

TEST(Conv1d, GradientCheck) {
  EXPECT_LT(LayerGradientError(Conv(1, 3, Activation::kLinear), 1, 6, 7), 1e-6);
  EXPECT_LT(LayerGradientError(Conv(3, 2, Activation::kTanh, 2), 2, 7, 8), 1e-6);
}

TEST(MaxPool1d, Example) {
  Tensor<double> in(4, 1);
  in[0] = 1; in[1] = 3; in[2] = 2; in[3] = 5;
  std::vector<std::size_t> arg;
  const auto out = MaxPool1d(in, 2, 2, &arg);
  ASSERT_EQ(out.rows(), 2u);
  EXPECT_EQ(out[0], 3);
  EXPECT_EQ(out[1], 5);
  EXPECT_EQ(arg, (std::vector<std::size_t>{1, 3}));
  EXPECT_THROW(MaxPool1d(Tensor<double>(1, 1), 2, 2), Error);
}

TEST(MaxPool1d, GradientCheck) {
  EXPECT_LT(LayerGradientError(Pool(2, 2), 3, 6, 9), 1e-6);
  EXPECT_LT(LayerGradientError(GlobalPool(), 2, 5, 10), 1e-6);
}

TEST(Dense, GradientCheck) {
  EXPECT_LT(LayerGradientError(Dense(3, Activation::kTanh), 4, 1, 11), 1e-6);
  EXPECT_LT(LayerGradientError(Dense(2, Activation::kRelu), 3, 1, 12), 1e-6);
  EXPECT_LT(LayerGradientError(Dense(1), 3, 1, 13), 1e-6);
}

TEST(WeightedBce, Examples) {
  const std::vector<int> y1 = {1};
  const std::vector<double> half = {0.5};
  const std::vector<double> w1 = {1.0};
  EXPECT_NEAR(WeightedBce<double>(y1, half, w1), std::log(2.0), 1e-15);
  const std::vector<double> perfect = {1.0};
  EXPECT_LT(WeightedBce<double>(y1, perfect, w1), 1e-6);
  EXPECT_GT(WeightedBce<double>(y1, perfect, w1), 0.0);

  const std::vector<int> y = {1, 0, 1, 0};
  const std::vector<double> p = {0.9, 0.2, 0.4, 0.7};
  const std::vector<double> w = {2, 1, 3, 1};
  const std::vector<double> w2 = {4, 2, 6, 2};
  EXPECT_NEAR(WeightedBce<double>(y, p, w), WeightedBce<double>(y, p, w2), 1e-15);
  EXPECT_GT(WeightedBce<double>(y, p, w), 0.0);
  const std::vector<double> shortp = {0.5};
  EXPECT_THROW(WeightedBce<double>(y, shortp, w), Error);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::mt19937_64 rng(14);
  Tensor<double> p = Random({3, 2}, rng);
  const Tensor<double> before = p;
  std::vector<Tensor<double>*> params = {&p};
  const std::vector<const Tensor<double>*> cparams = {&p};
  auto state = MakeAdamState<double>(cparams);
  const std::vector<Tensor<double>> grads = {Tensor<double>(3, 2)};
  for (int i = 0; i < 5; ++i) AdamStep<double>(params, grads, state, AdamConfig{});
  EXPECT_EQ(p, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Tensor<double> p(std::vector<std::size_t>{3});
  std::vector<Tensor<double>*> params = {&p};
  const std::vector<const Tensor<double>*> cparams = {&p};
  auto state = MakeAdamState<double>(cparams);
  Tensor<double> g(std::vector<std::size_t>{3});
  g[0] = 2.0; g[1] = -0.01; g[2] = 50.0;
  const std::vector<Tensor<double>> grads = {g};
  AdamStep<double>(params, grads, state, AdamConfig{});
  EXPECT_NEAR(p[0], -0.001, 1e-9);
  EXPECT_NEAR(p[1], 0.001, 1e-6);
  EXPECT_NEAR(p[2], -0.001, 1e-9);
}

TEST(Adam, ConstantGradientStepApproachesLearningRate) {
  // Recurrence iterated by hand: the bias-corrected ratio m_hat / sqrt(v_hat)
  // is exactly 1 for a constant gradient, so every step has size lr / (1 + eps/|g|).
  Tensor<double> p(std::vector<std::size_t>{1});
  std::vector<Tensor<double>*> params = {&p};
  const std::vector<const Tensor<double>*> cparams = {&p};
  auto state = MakeAdamState<double>(cparams);
  Tensor<double> g(std::vector<std::size_t>{1}, 0.3);
  const std::vector<Tensor<double>> grads = {g};
  double prev = 0.0;
  for (int i = 0; i < 1000; ++i) {
    AdamStep<double>(params, grads, state, AdamConfig{});
    const double step = prev - p[0];
    EXPECT_NEAR(step, 0.001, 1e-9);
    prev = p[0];
  }
}

TEST(ChopBounds, Layout) {
  EXPECT_EQ(ChopBounds(6, 1), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 6}}));
  EXPECT_EQ(ChopBounds(7, 3),
            (std::vector<std::pair<std::size_t, std::size_t>>{{0, 3}, {3, 6}, {6, 7}}));
  EXPECT_EQ(ChopBounds(4, 4).size(), 4u);
  EXPECT_THROW(ChopBounds(0, 2), Error);
}

TEST(NetworkConfig, Validation) {
  std::mt19937_64 rng(15);
  const auto toy = fixture::MakeToy(rng);
  EXPECT_THROW(fixture::MakeNetwork<double>(EmbeddingVariant::kSCE, {Lstm(2), Dense(1)}, toy, 1),
               Error);
  EXPECT_THROW(fixture::MakeNetwork<double>(EmbeddingVariant::kSCE, {Dense(1), Sigmoid()}, toy, 1),
               Error);
  EXPECT_THROW(fixture::MakeNetwork<double>(EmbeddingVariant::kSCE, {Lstm(2), Sigmoid()}, toy, 1),
               Error);
  EXPECT_NO_THROW(
      fixture::MakeNetwork<double>(EmbeddingVariant::kSCE, {Lstm(1), Sigmoid()}, toy, 1));
}

TEST(Network, FullGradientCheckAllTemplates) {
  for (const auto& tpl : fixture::GradientTemplates()) {
    std::mt19937_64 rng(16);
    const auto toy = fixture::MakeToy(rng);
    auto net = fixture::MakeNetwork<double>(tpl.variant, tpl.layers, toy, 17, tpl.chop_count);
    const auto report = oracle::CheckNetworkGradients(net, toy.inputs, toy.targets, toy.scales);
    EXPECT_LT(report.max_rel_error, 1e-6) << tpl.name << " worst " << report.worst;
    EXPECT_EQ(report.checked, net.ParameterCount());
  }
}

TEST(Network, GradientCheckChoppedAndDeepHead) {
  std::mt19937_64 rng(18);
  const auto toy = fixture::MakeToy(rng, 3, 6);
  auto chopped = fixture::MakeNetwork<double>(
      EmbeddingVariant::kICE, {Lstm(3), Dense(3, Activation::kTanh), Dense(1), Sigmoid()}, toy,
      19, 2);
  const auto r1 = oracle::CheckNetworkGradients(chopped, toy.inputs, toy.targets, toy.scales);
  EXPECT_LT(r1.max_rel_error, 1e-6) << r1.worst;

  auto stacked = fixture::MakeNetwork<double>(
      EmbeddingVariant::kSCE, {Lstm(3, true), Irnn(2), Dense(1), Sigmoid()}, toy, 20);
  const auto r2 = oracle::CheckNetworkGradients(stacked, toy.inputs, toy.targets, toy.scales);
  EXPECT_LT(r2.max_rel_error, 1e-6) << r2.worst;

  auto pooled = fixture::MakeNetwork<double>(
      EmbeddingVariant::kWdE, {Conv(2, 2, Activation::kTanh), GlobalPool(), Dense(1), Sigmoid()},
      toy, 21);
  const auto r3 = oracle::CheckNetworkGradients(pooled, toy.inputs, toy.targets, toy.scales);
  EXPECT_LT(r3.max_rel_error, 1e-6) << r3.worst;
}

TEST(Network, SingleChunkEqualsUnchopped) {
  std::mt19937_64 rng(22);
  const auto toy = fixture::MakeToy(rng);
  const auto net = fixture::MakeNetwork<double>(EmbeddingVariant::kSCE,
                                                {Lstm(4), Dense(1), Sigmoid()}, toy, 23);
  for (const auto& input : toy.inputs) {
    ForwardTrace<double> trace;
    EmbeddingCache cache;
    const auto embedded = net.embedding().Forward(input, cache);
    ChunkTrace<double> chunk;
    const auto direct = net.EncodeChunk(embedded, chunk);
    const auto pooled = net.ChopAndPool(embedded, 1, trace);
    EXPECT_EQ(direct, pooled);
  }
}

TEST(Network, RepeatedChunksPoolToSingleFeature) {
  std::mt19937_64 rng(24);
  const auto toy = fixture::MakeToy(rng);
  const auto net = fixture::MakeNetwork<double>(EmbeddingVariant::kICE,
                                                {Lstm(4), Dense(1), Sigmoid()}, toy, 25);
  const auto piece = toy.inputs[0];
  SymbolSequence repeated = piece;
  for (int i = 0; i < 2; ++i) repeated.Append(piece);
  EmbeddingCache c1, c2;
  const auto e1 = net.embedding().Forward(piece, c1);
  const auto e3 = net.embedding().Forward(repeated, c2);
  ChunkTrace<double> chunk;
  const auto single = net.EncodeChunk(e1, chunk);
  ForwardTrace<double> trace;
  EXPECT_EQ(net.ChopAndPool(e3, 3, trace), single);

  // One chunk per step: global max of per-step encodings.
  ForwardTrace<double> per_step;
  const auto all = net.ChopAndPool(e1, e1.rows(), per_step);
  for (std::size_t k = 0; k < all.size(); ++k) {
    double best = -1e300;
    for (std::size_t t = 0; t < e1.rows(); ++t) {
      Tensor<double> step(1, e1.cols());
      for (std::size_t c = 0; c < e1.cols(); ++c) step(0, c) = e1(t, c);
      ChunkTrace<double> ct;
      best = std::max(best, net.EncodeChunk(step, ct)[k]);
    }
    EXPECT_EQ(all[k], best);
  }
}

TEST(Network, ParallelChunksMatchSerial) {
  std::mt19937_64 rng(26);
  const auto toy = fixture::MakeToy(rng, 4, 12);
  const auto net = fixture::MakeNetwork<double>(EmbeddingVariant::kSCE,
                                                {Lstm(4), Dense(1), Sigmoid()}, toy, 27, 3);
  for (std::size_t i = 0; i < toy.inputs.size(); ++i) {
    EXPECT_EQ(net.Predict(toy.inputs[i], Exec::kSerial), net.Predict(toy.inputs[i], Exec::kParallel));
    auto g1 = net.ZeroGradients();
    auto g2 = net.ZeroGradients();
    net.Accumulate(toy.inputs[i], toy.targets[i], 1.0, g1, Exec::kSerial);
    net.Accumulate(toy.inputs[i], toy.targets[i], 1.0, g2, Exec::kParallel);
    EXPECT_EQ(g1, g2);
  }
}

TEST(Network, SmallAdamStepDecreasesLoss) {
  for (const auto& tpl : fixture::GradientTemplates()) {
    std::mt19937_64 rng(28);
    const auto toy = fixture::MakeToy(rng);
    auto net = fixture::MakeNetwork<double>(tpl.variant, tpl.layers, toy, 29);
    const double before = oracle::BatchLoss<double>(net, toy.inputs, toy.targets, toy.scales);
    auto grads = net.ZeroGradients();
    for (std::size_t i = 0; i < toy.inputs.size(); ++i) {
      net.Accumulate(toy.inputs[i], toy.targets[i], toy.scales[i], grads);
    }
    auto params = net.Parameters();
    const auto cparams = std::as_const(net).Parameters();
    auto state = MakeAdamState<double>(cparams);
    AdamConfig cfg;
    cfg.learning_rate = 1e-4;
    AdamStep<double>(params, grads, state, cfg);
    net.ProjectConstraints();
    const double after = oracle::BatchLoss<double>(net, toy.inputs, toy.targets, toy.scales);
    EXPECT_LT(after, before) << tpl.name;
  }
}

TEST(Network, ParameterNames) {
  std::mt19937_64 rng(30);
  const auto toy = fixture::MakeToy(rng);
  const auto net = fixture::MakeNetwork<double>(EmbeddingVariant::kSCE,
                                                {Lstm(2), Dense(1), Sigmoid()}, toy, 31);
  const auto names = net.ParameterNames();
  EXPECT_EQ(names.size(), net.Parameters().size());
  EXPECT_NE(std::find(names.begin(), names.end(), "layer0.lstm.wx"), names.end());
}

}  // namespace
}  // namespace symev
