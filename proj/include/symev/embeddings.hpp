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

// Trainable symbol embeddings.
//
//   WdE  one d-vector per vocabulary word (the tuple of all symbols at a
//        step); table shape [d, v], column = word.
//   SCE  one d-vector per symbol of each variable, summed over variables;
//        table i has shape [d, s_i].
//   ICE  one scalar per symbol of each variable, concatenated over variables;
//        row i has shape [1, s_i] and ordered rows stay sorted.

#ifndef SYMEV_EMBEDDINGS_HPP_
#define SYMEV_EMBEDDINGS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symev/partitioning.hpp"
#include "symev/sequence.hpp"
#include "symev/tensor.hpp"

namespace symev {

enum class EmbeddingVariant { kWdE, kSCE, kICE };

std::string_view VariantName(EmbeddingVariant variant);
EmbeddingVariant ParseVariant(std::string_view name);

struct VocabThreshold {
  enum class Kind { kMinCount, kMinRelativeFrequency };
  Kind kind = Kind::kMinCount;
  // kMinCount: keep words seen at least `value` times.
  // kMinRelativeFrequency: keep words whose share of all steps is >= value.
  double value = 1.0;

  bool operator==(const VocabThreshold&) const = default;
};

class Vocabulary {
 public:
  using Word = std::vector<Symbol>;

  Vocabulary() = default;

  static Vocabulary Build(std::span<const SymbolSequence> training,
                          VocabThreshold threshold);
  // Rebuilds from serialized entries; indices must cover 1..size()-1 once.
  static Vocabulary FromEntries(std::size_t arity,
                                std::vector<std::pair<Word, std::size_t>> entries,
                                VocabThreshold threshold);

  std::size_t size() const { return words_.size() + 1; }  // v, including OOV
  std::size_t oov_index() const { return 0; }
  std::size_t arity() const { return arity_; }
  const VocabThreshold& threshold() const { return threshold_; }

  std::size_t Lookup(std::span<const Symbol> word) const;
  std::vector<std::size_t> Encode(const SymbolSequence& seq) const;

  // (word, index) pairs in index order.
  std::vector<std::pair<Word, std::size_t>> Entries() const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::size_t arity_ = 0;
  std::map<Word, std::size_t> words_;
  VocabThreshold threshold_;
};

template <typename T>
Tensor<T> WdeForward(std::span<const std::size_t> word_indices,
                     const Tensor<T>& table);
template <typename T>
Tensor<T> SceForward(const SymbolSequence& symbols,
                     std::span<const Tensor<T>> tables);
template <typename T>
Tensor<T> IceForward(const SymbolSequence& symbols,
                     std::span<const Tensor<T>> rows);

// Accumulate parameter gradients from upstream [steps, out_dim] gradients.
template <typename T>
void WdeBackward(const Tensor<T>& upstream,
                 std::span<const std::size_t> word_indices, Tensor<T>& grad);
template <typename T>
void SceBackward(const Tensor<T>& upstream, const SymbolSequence& symbols,
                 std::span<Tensor<T>> grads);
template <typename T>
void IceBackward(const Tensor<T>& upstream, const SymbolSequence& symbols,
                 std::span<Tensor<T>> grads);

// Stable ascending sort of every ordered row.
template <typename T>
void IceProject(std::span<Tensor<T>> rows, const std::vector<bool>& ordered);

template <typename T>
std::vector<Tensor<T>> IceInit(std::span<const VariableSpec> specs, double scale,
                               std::mt19937_64& rng);

std::size_t CountEmbeddingParams(EmbeddingVariant variant,
                                 std::span<const std::size_t> alphabet_sizes,
                                 std::size_t dim, std::size_t vocab_size);

struct EmbeddingCache {
  std::vector<std::size_t> word_indices;  // WdE only
};

// Embedding layer used as the first stage of a network.
template <typename T>
class Embedding {
 public:
  Embedding() = default;

  // `dim` is ignored for ICE (output dimension is the variable count).
  static Embedding Create(EmbeddingVariant variant,
                          std::span<const VariableSpec> specs, std::size_t dim,
                          std::optional<Vocabulary> vocabulary,
                          double init_scale, double ice_scale,
                          std::mt19937_64& rng);
  // Shapes only; values zero. Used when restoring checkpoints.
  static Embedding Shaped(EmbeddingVariant variant,
                          std::vector<std::size_t> alphabet_sizes,
                          std::vector<bool> ordered, std::size_t dim,
                          std::optional<Vocabulary> vocabulary);

  EmbeddingVariant variant() const { return variant_; }
  std::size_t input_arity() const { return alphabet_sizes_.size(); }
  std::size_t output_dim() const;
  std::size_t dim() const { return dim_; }
  const std::vector<std::size_t>& alphabet_sizes() const { return alphabet_sizes_; }
  const std::vector<bool>& ordered() const { return ordered_; }
  const std::optional<Vocabulary>& vocabulary() const { return vocabulary_; }

  std::vector<Tensor<T>>& tables() { return tables_; }
  const std::vector<Tensor<T>>& tables() const { return tables_; }
  std::size_t ParameterCount() const;

  Tensor<T> Forward(const SymbolSequence& input, EmbeddingCache& cache) const;
  void Backward(const Tensor<T>& upstream, const SymbolSequence& input,
                const EmbeddingCache& cache, std::span<Tensor<T>> grads) const;
  // Restores the ICE order constraint; no-op for other variants.
  void Project();

 private:
  void CheckInput(const SymbolSequence& input) const;

  EmbeddingVariant variant_ = EmbeddingVariant::kSCE;
  std::size_t dim_ = 0;
  std::vector<std::size_t> alphabet_sizes_;
  std::vector<bool> ordered_;
  std::optional<Vocabulary> vocabulary_;
  std::vector<Tensor<T>> tables_;
};

}  // namespace symev

#endif  // SYMEV_EMBEDDINGS_HPP_
