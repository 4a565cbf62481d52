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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symev/embeddings.hpp"
#include "symev/errors.hpp"

namespace symev {
namespace {

std::vector<VariableSpec> Specs(std::vector<std::size_t> sizes, std::vector<bool> ordered) {
  std::vector<VariableSpec> out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<std::string> cats;
    for (std::size_t k = 0; k < sizes[i]; ++k) cats.push_back("c" + std::to_string(k));
    out.push_back(VariableSpec::Categorical("v" + std::to_string(i), cats, ordered[i]));
  }
  return out;
}

SymbolSequence Seq(std::size_t arity, std::vector<Symbol> s) { return {arity, std::move(s)}; }

TEST(Vocabulary, SingleRepeatedWord) {
  const std::vector<SymbolSequence> clips = {Seq(2, {1, 0, 1, 0, 1, 0})};
  const auto v = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinCount, 1});
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.oov_index(), 0u);
  const std::vector<Symbol> word = {1, 0};
  EXPECT_EQ(v.Lookup(word), 1u);
  const std::vector<Symbol> unseen = {0, 0};
  EXPECT_EQ(v.Lookup(unseen), v.oov_index());
}

TEST(Vocabulary, CountAndRelativeThresholds) {
  // word (0) x5, (1) x2, (2) x1, (3) x92 over 100 steps.
  std::vector<Symbol> s;
  for (int i = 0; i < 5; ++i) s.push_back(0);
  for (int i = 0; i < 2; ++i) s.push_back(1);
  s.push_back(2);
  for (int i = 0; i < 92; ++i) s.push_back(3);
  const std::vector<SymbolSequence> clips = {Seq(1, s)};
  const auto more_than_one = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinCount, 2});
  EXPECT_EQ(more_than_one.size(), 4u);  // words 0, 1, 3 plus OOV
  EXPECT_EQ(more_than_one.Lookup(std::vector<Symbol>{2}), 0u);
  const auto share = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinRelativeFrequency, 0.03});
  EXPECT_EQ(share.size(), 3u);  // words 0 and 3 plus OOV
  EXPECT_EQ(share.Lookup(std::vector<Symbol>{1}), 0u);
  // Lexicographic indices after the OOV slot.
  EXPECT_EQ(more_than_one.Lookup(std::vector<Symbol>{0}), 1u);
  EXPECT_EQ(more_than_one.Lookup(std::vector<Symbol>{1}), 2u);
  EXPECT_EQ(more_than_one.Lookup(std::vector<Symbol>{3}), 3u);
  EXPECT_THROW(Vocabulary::Build(std::vector<SymbolSequence>{}, {}), Error);
}

TEST(Vocabulary, RoundTripEntries) {
  std::mt19937_64 rng(2);
  std::vector<SymbolSequence> clips;
  const std::vector<std::size_t> alphabet = {3, 2};
  for (int i = 0; i < 5; ++i) clips.push_back(oracle::RandomSequence(alphabet, 6, rng));
  const auto v = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinCount, 2});
  const auto back = Vocabulary::FromEntries(v.arity(), v.Entries(), v.threshold());
  EXPECT_EQ(back, v);
}

TEST(WdeForward, LooksUpColumns) {
  Tensor<double> table(3, 4);
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = static_cast<double>(i);
  const std::vector<std::size_t> idx = {2, 0, 2};
  const auto out = WdeForward<double>(idx, table);
  ASSERT_EQ(out.shape(), (std::vector<std::size_t>{3, 3}));
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(out(0, r), table(r, 2));
  for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(out(0, r), out(2, r));
  const std::vector<std::size_t> bad = {4};
  EXPECT_THROW(WdeForward<double>(bad, table), Error);
}

TEST(WdeBackward, AccumulatesIntoColumn) {
  Tensor<double> grad(2, 3);
  Tensor<double> up(2, 2);
  up(0, 0) = 1.5;
  up(0, 1) = -2.0;
  up(1, 0) = 1.5;
  up(1, 1) = -2.0;
  const std::vector<std::size_t> once = {1};
  Tensor<double> single(1, 2);
  single(0, 0) = 1.5;
  single(0, 1) = -2.0;
  WdeBackward<double>(single, once, grad);
  EXPECT_EQ(grad(0, 1), 1.5);
  EXPECT_EQ(grad(1, 1), -2.0);
  EXPECT_EQ(grad(0, 0), 0.0);
  EXPECT_EQ(grad(1, 2), 0.0);
  grad.SetZero();
  const std::vector<std::size_t> twice = {1, 1};
  WdeBackward<double>(up, twice, grad);
  EXPECT_EQ(grad(0, 1), 3.0);
  EXPECT_EQ(grad(1, 1), -4.0);
}

TEST(SceForward, SumsColumns) {
  std::vector<Tensor<double>> tables = {Tensor<double>(2, 2), Tensor<double>(2, 5)};
  tables[0](0, 0) = 1;
  tables[0](1, 0) = 2;
  tables[1](0, 4) = 10;
  tables[1](1, 4) = 20;
  const auto out = SceForward<double>(Seq(2, {0, 4}), tables);
  EXPECT_EQ(out(0, 0), 11);
  EXPECT_EQ(out(0, 1), 22);

  std::vector<Tensor<double>> zeros = {Tensor<double>(3, 2), Tensor<double>(3, 2)};
  const auto z = SceForward<double>(Seq(2, {1, 1, 0, 1}), zeros);
  EXPECT_TRUE(std::all_of(z.values().begin(), z.values().end(), [](double x) { return x == 0; }));
  EXPECT_THROW(SceForward<double>(Seq(2, {0, 5}), tables), Error);
}

TEST(SceForward, VariableOrderInvariant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Tensor<double>> t = {Tensor<double>(3, 2), Tensor<double>(3, 4), Tensor<double>(3, 3)};
  for (auto& x : t) for (auto& v : x.values()) v = u(rng);
  const std::vector<std::size_t> alphabet = {2, 4, 3};
  const auto seq = oracle::RandomSequence(alphabet, 5, rng);
  SymbolSequence rev;
  rev.arity = 3;
  for (std::size_t n = 0; n < seq.steps(); ++n) {
    const auto s = seq.step(n);
    rev.symbols.insert(rev.symbols.end(), {s[2], s[1], s[0]});
  }
  std::vector<Tensor<double>> trev = {t[2], t[1], t[0]};
  const auto a = SceForward<double>(seq, t);
  const auto b = SceForward<double>(rev, trev);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);

  const auto ia = IceForward<double>(seq, std::vector<Tensor<double>>{Tensor<double>(1, 2, 1.0), Tensor<double>(1, 4, 2.0), Tensor<double>(1, 3, 3.0)});
  EXPECT_EQ(ia.cols(), 3u);
  EXPECT_EQ(ia(0, 0), 1.0);
  EXPECT_EQ(ia(0, 2), 3.0);
}

TEST(IceForward, ConcatenatesScalars) {
  std::vector<Tensor<double>> rows = {Tensor<double>(1, 2), Tensor<double>(1, 5)};
  rows[0][0] = 0.1;
  rows[0][1] = 0.2;
  rows[1][4] = 0.9;
  const auto out = IceForward<double>(Seq(2, {0, 4, 0, 4}), rows);
  ASSERT_EQ(out.shape(), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(out(0, 0), 0.1);
  EXPECT_EQ(out(0, 1), 0.9);
  EXPECT_EQ(out(1, 0), out(0, 0));
  EXPECT_EQ(out(1, 1), out(0, 1));
}

TEST(IceProject, SortsOrderedRowsOnly) {
  std::vector<Tensor<double>> rows = {Tensor<double>(1, 3), Tensor<double>(1, 3), Tensor<double>(1, 3)};
  const double a[] = {0.3, 0.1, 0.2};
  for (int i = 0; i < 3; ++i) {
    rows[0][i] = a[i];
    rows[1][i] = a[i];
    rows[2][i] = 0.1 * i;
  }
  IceProject<double>(rows, {true, false, true});
  EXPECT_EQ(rows[0].values()[0], 0.1);
  EXPECT_EQ(rows[0].values()[1], 0.2);
  EXPECT_EQ(rows[0].values()[2], 0.3);
  EXPECT_EQ(rows[1].values()[0], 0.3);
  EXPECT_EQ(rows[2][1], 0.1);
}

TEST(IceInit, EvenGrid) {
  std::mt19937_64 rng(1);
  const auto specs = Specs({4, 2, 5}, {true, true, false});
  auto rows = IceInit<double>(specs, 1.0, rng);
  EXPECT_DOUBLE_EQ(rows[0][0], -1.0);
  EXPECT_DOUBLE_EQ(rows[0][1], -1.0 / 3.0);
  EXPECT_DOUBLE_EQ(rows[0][2], 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(rows[0][3], 1.0);
  auto half = IceInit<double>(Specs({2}, {true}), 0.5, rng);
  EXPECT_DOUBLE_EQ(half[0][0], -0.5);
  EXPECT_DOUBLE_EQ(half[0][1], 0.5);
  std::vector<double> unordered(rows[2].values().begin(), rows[2].values().end());
  std::sort(unordered.begin(), unordered.end());
  EXPECT_DOUBLE_EQ(unordered.front(), -1.0);
  EXPECT_DOUBLE_EQ(unordered.back(), 1.0);
}

TEST(CountEmbeddingParams, HardDiskColumn) {
  const std::vector<std::size_t> sizes(14, 4);
  EXPECT_EQ(CountEmbeddingParams(EmbeddingVariant::kWdE, sizes, 16, 509), 8144u);
  EXPECT_EQ(CountEmbeddingParams(EmbeddingVariant::kSCE, sizes, 2, 0), 112u);
  EXPECT_EQ(CountEmbeddingParams(EmbeddingVariant::kICE, sizes, 0, 0), 56u);
}

TEST(Embedding, AllocatedCountMatchesFormula) {
  std::mt19937_64 rng(4);
  const auto specs = Specs({3, 4, 2}, {true, false, true});
  const std::vector<std::size_t> sizes = {3, 4, 2};
  std::vector<SymbolSequence> clips;
  for (int i = 0; i < 6; ++i) clips.push_back(oracle::RandomSequence(sizes, 5, rng));
  const auto vocab = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinCount, 1});
  for (auto variant : {EmbeddingVariant::kWdE, EmbeddingVariant::kSCE, EmbeddingVariant::kICE}) {
    const auto e = Embedding<double>::Create(variant, specs, 3, vocab, 0.05, 1.0, rng);
    EXPECT_EQ(e.ParameterCount(), CountEmbeddingParams(variant, sizes, 3, vocab.size()));
  }
}

TEST(Embedding, UnseenWordUsesOov) {
  std::mt19937_64 rng(5);
  const auto specs = Specs({2, 2}, {true, true});
  const std::vector<SymbolSequence> clips = {Seq(2, {0, 0, 0, 1, 0, 0})};
  auto e = Embedding<double>::Create(EmbeddingVariant::kWdE, specs, 2,
                                     Vocabulary::Build(clips, {}), 0.05, 1.0, rng);
  EmbeddingCache cache;
  const auto out = e.Forward(Seq(2, {1, 1}), cache);
  EXPECT_EQ(cache.word_indices, (std::vector<std::size_t>{0}));
  EXPECT_EQ(out(0, 0), e.tables()[0](0, 0));
}

TEST(Embedding, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto specs = Specs({3, 4, 2}, {true, false, true});
  const std::vector<std::size_t> sizes = {3, 4, 2};
  std::vector<SymbolSequence> clips;
  for (int i = 0; i < 4; ++i) clips.push_back(oracle::RandomSequence(sizes, 6, rng));
  const auto vocab = Vocabulary::Build(clips, {VocabThreshold::Kind::kMinCount, 1});
  for (auto variant : {EmbeddingVariant::kWdE, EmbeddingVariant::kSCE, EmbeddingVariant::kICE}) {
    auto e = Embedding<double>::Create(variant, specs, 3, vocab, 0.5, 1.0, rng);
    const auto input = oracle::RandomSequence(sizes, 6, rng);
    EmbeddingCache cache;
    const auto out = e.Forward(input, cache);
    Tensor<double> c(out.shape());
    for (auto& x : c.values()) x = u(rng);
    const auto loss = [&] {
      EmbeddingCache tmp;
      const auto o = e.Forward(input, tmp);
      double s = 0;
      for (std::size_t i = 0; i < o.size(); ++i) s += c[i] * o[i];
      return s;
    };
    std::vector<Tensor<double>> grads;
    for (const auto& t : e.tables()) grads.emplace_back(t.shape());
    e.Backward(c, input, cache, grads);
    double worst = 0;
    for (std::size_t t = 0; t < e.tables().size(); ++t) {
      for (std::size_t k = 0; k < e.tables()[t].size(); ++k) {
        double& x = e.tables()[t][k];
        const double saved = x;
        x = saved + 1e-5;
        const double up = loss();
        x = saved - 1e-5;
        const double down = loss();
        x = saved;
        const double numeric = (up - down) / 2e-5;
        worst = std::max(worst, std::abs(numeric - grads[t][k]) /
                                    std::max(std::abs(numeric) + std::abs(grads[t][k]), 1e-4));
      }
    }
    EXPECT_LT(worst, 1e-6) << VariantName(variant);
  }
}

TEST(Variant, Names) {
  EXPECT_EQ(ParseVariant("wde"), EmbeddingVariant::kWdE);
  EXPECT_EQ(ParseVariant(VariantName(EmbeddingVariant::kICE)), EmbeddingVariant::kICE);
  EXPECT_THROW(ParseVariant("bogus"), Error);
}

}  // namespace
}  // namespace symev
