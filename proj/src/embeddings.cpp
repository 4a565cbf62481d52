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

#include "symev/embeddings.hpp"

#include <algorithm>
#include <numeric>

#include "symev/errors.hpp"

namespace symev {

std::string_view VariantName(EmbeddingVariant variant) {
  switch (variant) {
    case EmbeddingVariant::kWdE: return "wde";
    case EmbeddingVariant::kSCE: return "sce";
    case EmbeddingVariant::kICE: return "ice";
  }
  return "?";
}

EmbeddingVariant ParseVariant(std::string_view name) {
  if (name == "wde" || name == "WdE") return EmbeddingVariant::kWdE;
  if (name == "sce" || name == "SCE") return EmbeddingVariant::kSCE;
  if (name == "ice" || name == "ICE") return EmbeddingVariant::kICE;
  Fail(ErrorCode::kConfig, "unknown embedding variant '" + std::string(name) + "'");
}

Vocabulary Vocabulary::Build(std::span<const SymbolSequence> training,
                             VocabThreshold threshold) {
  std::map<Word, std::size_t> counts;
  std::size_t total = 0;
  std::size_t arity = 0;
  for (const auto& seq : training) {
    if (seq.steps() == 0) continue;
    if (arity == 0) arity = seq.arity;
    if (seq.arity != arity) {
      Fail(ErrorCode::kShapeMismatch, "training words differ in arity");
    }
    for (std::size_t n = 0; n < seq.steps(); ++n) {
      const auto step = seq.step(n);
      ++counts[Word(step.begin(), step.end())];
      ++total;
    }
  }
  if (total == 0) Fail(ErrorCode::kEmptyDataset, "no training words for the vocabulary");

  Vocabulary vocab;
  vocab.arity_ = arity;
  vocab.threshold_ = threshold;
  std::size_t next = 1;  // 0 is the OOV word
  for (const auto& [word, count] : counts) {
    const bool keep =
        threshold.kind == VocabThreshold::Kind::kMinCount
            ? static_cast<double>(count) >= threshold.value
            : static_cast<double>(count) / static_cast<double>(total) >= threshold.value;
    if (keep) vocab.words_.emplace(word, next++);
  }
  return vocab;
}

Vocabulary Vocabulary::FromEntries(std::size_t arity,
                                   std::vector<std::pair<Word, std::size_t>> entries,
                                   VocabThreshold threshold) {
  Vocabulary vocab;
  vocab.arity_ = arity;
  vocab.threshold_ = threshold;
  std::vector<bool> used(entries.size() + 1, false);
  for (auto& [word, index] : entries) {
    if (word.size() != arity || index == 0 || index > entries.size() || used[index]) {
      Fail(ErrorCode::kData, "malformed vocabulary entry");
    }
    used[index] = true;
    vocab.words_.emplace(std::move(word), index);
  }
  if (vocab.words_.size() != entries.size()) {
    Fail(ErrorCode::kData, "duplicate vocabulary word");
  }
  return vocab;
}

std::size_t Vocabulary::Lookup(std::span<const Symbol> word) const {
  const auto it = words_.find(Word(word.begin(), word.end()));
  return it == words_.end() ? oov_index() : it->second;
}

std::vector<std::size_t> Vocabulary::Encode(const SymbolSequence& seq) const {
  if (seq.steps() > 0 && seq.arity != arity_) {
    Fail(ErrorCode::kShapeMismatch, "word arity " + std::to_string(seq.arity) +
                                        " != vocabulary arity " +
                                        std::to_string(arity_));
  }
  std::vector<std::size_t> out(seq.steps());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = Lookup(seq.step(n));
  return out;
}

std::vector<std::pair<Vocabulary::Word, std::size_t>> Vocabulary::Entries() const {
  std::vector<std::pair<Word, std::size_t>> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

template <typename T>
Tensor<T> WdeForward(std::span<const std::size_t> word_indices,
                     const Tensor<T>& table) {
  const std::size_t d = table.rows();
  const std::size_t v = table.cols();
  Tensor<T> out(word_indices.size(), d);
  for (std::size_t n = 0; n < word_indices.size(); ++n) {
    const std::size_t w = word_indices[n];
    if (w >= v) {
      Fail(ErrorCode::kIndexOutOfRange,
           "word index " + std::to_string(w) + " >= vocabulary size " + std::to_string(v));
    }
    for (std::size_t k = 0; k < d; ++k) out(n, k) = table(k, w);
  }
  return out;
}

namespace {

void CheckSymbols(const SymbolSequence& symbols, std::size_t variables,
                  const auto& width_of) {
  if (symbols.arity != variables) {
    Fail(ErrorCode::kShapeMismatch, "input has " + std::to_string(symbols.arity) +
                                        " variables, embedding expects " +
                                        std::to_string(variables));
  }
  for (std::size_t n = 0; n < symbols.steps(); ++n) {
    const auto step = symbols.step(n);
    for (std::size_t i = 0; i < variables; ++i) {
      if (step[i] >= width_of(i)) {
        Fail(ErrorCode::kIndexOutOfRange,
             "symbol " + std::to_string(step[i]) + " of variable " +
                 std::to_string(i) + " out of range");
      }
    }
  }
}

}  // namespace

template <typename T>
Tensor<T> SceForward(const SymbolSequence& symbols,
                     std::span<const Tensor<T>> tables) {
  CheckSymbols(symbols, tables.size(), [&](std::size_t i) { return tables[i].cols(); });
  const std::size_t d = tables.empty() ? 0 : tables[0].rows();
  Tensor<T> out(symbols.steps(), d);
  for (std::size_t n = 0; n < symbols.steps(); ++n) {
    const auto step = symbols.step(n);
    for (std::size_t i = 0; i < tables.size(); ++i) {
      for (std::size_t k = 0; k < d; ++k) out(n, k) += tables[i](k, step[i]);
    }
  }
  return out;
}

template <typename T>
Tensor<T> IceForward(const SymbolSequence& symbols,
                     std::span<const Tensor<T>> rows) {
  CheckSymbols(symbols, rows.size(), [&](std::size_t i) { return rows[i].size(); });
  Tensor<T> out(symbols.steps(), rows.size());
  for (std::size_t n = 0; n < symbols.steps(); ++n) {
    const auto step = symbols.step(n);
    for (std::size_t i = 0; i < rows.size(); ++i) out(n, i) = rows[i][step[i]];
  }
  return out;
}

template <typename T>
void WdeBackward(const Tensor<T>& upstream,
                 std::span<const std::size_t> word_indices, Tensor<T>& grad) {
  const std::size_t d = grad.rows();
  if (upstream.rows() != word_indices.size() || upstream.cols() != d) {
    Fail(ErrorCode::kShapeMismatch, "WdE upstream gradient shape");
  }
  for (std::size_t n = 0; n < word_indices.size(); ++n) {
    const std::size_t w = word_indices[n];
    if (w >= grad.cols()) Fail(ErrorCode::kIndexOutOfRange, "WdE word index");
    for (std::size_t k = 0; k < d; ++k) grad(k, w) += upstream(n, k);
  }
}

template <typename T>
void SceBackward(const Tensor<T>& upstream, const SymbolSequence& symbols,
                 std::span<Tensor<T>> grads) {
  const std::size_t d = grads.empty() ? 0 : grads[0].rows();
  if (upstream.rows() != symbols.steps() || upstream.cols() != d ||
      symbols.arity != grads.size()) {
    Fail(ErrorCode::kShapeMismatch, "SCE upstream gradient shape");
  }
  for (std::size_t n = 0; n < symbols.steps(); ++n) {
    const auto step = symbols.step(n);
    for (std::size_t i = 0; i < grads.size(); ++i) {
      for (std::size_t k = 0; k < d; ++k) grads[i](k, step[i]) += upstream(n, k);
    }
  }
}

template <typename T>
void IceBackward(const Tensor<T>& upstream, const SymbolSequence& symbols,
                 std::span<Tensor<T>> grads) {
  if (upstream.rows() != symbols.steps() || upstream.cols() != grads.size() ||
      symbols.arity != grads.size()) {
    Fail(ErrorCode::kShapeMismatch, "ICE upstream gradient shape");
  }
  for (std::size_t n = 0; n < symbols.steps(); ++n) {
    const auto step = symbols.step(n);
    for (std::size_t i = 0; i < grads.size(); ++i) grads[i][step[i]] += upstream(n, i);
  }
}

template <typename T>
void IceProject(std::span<Tensor<T>> rows, const std::vector<bool>& ordered) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i < ordered.size() && ordered[i]) {
      auto values = rows[i].values();
      std::stable_sort(values.begin(), values.end());
    }
  }
}

template <typename T>
std::vector<Tensor<T>> IceInit(std::span<const VariableSpec> specs, double scale,
                               std::mt19937_64& rng) {
  if (!(scale > 0.0)) Fail(ErrorCode::kConfig, "ICE init scale must be positive");
  std::vector<Tensor<T>> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    const std::size_t s = spec.alphabet_size;
    Tensor<T> row(1, s);
    for (std::size_t k = 0; k < s; ++k) {
      const double grid = s == 1 ? 0.0
                                 : -scale + 2.0 * scale * static_cast<double>(k) /
                                                static_cast<double>(s - 1);
      row[k] = static_cast<T>(grid);
    }
    if (!spec.ordered) {
      auto values = row.values();
      std::shuffle(values.begin(), values.end(), rng);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t CountEmbeddingParams(EmbeddingVariant variant,
                                 std::span<const std::size_t> alphabet_sizes,
                                 std::size_t dim, std::size_t vocab_size) {
  const std::size_t symbols =
      std::accumulate(alphabet_sizes.begin(), alphabet_sizes.end(), std::size_t{0});
  switch (variant) {
    case EmbeddingVariant::kWdE: return dim * vocab_size;
    case EmbeddingVariant::kSCE: return dim * symbols;
    case EmbeddingVariant::kICE: return symbols;
  }
  return 0;
}

template <typename T>
Embedding<T> Embedding<T>::Shaped(EmbeddingVariant variant,
                                  std::vector<std::size_t> alphabet_sizes,
                                  std::vector<bool> ordered, std::size_t dim,
                                  std::optional<Vocabulary> vocabulary) {
  Embedding e;
  e.variant_ = variant;
  e.alphabet_sizes_ = std::move(alphabet_sizes);
  e.ordered_ = std::move(ordered);
  e.ordered_.resize(e.alphabet_sizes_.size(), false);
  e.dim_ = variant == EmbeddingVariant::kICE ? 1 : dim;
  if (variant != EmbeddingVariant::kICE && dim == 0) {
    Fail(ErrorCode::kConfig, "embedding dimension must be positive");
  }
  switch (variant) {
    case EmbeddingVariant::kWdE:
      if (!vocabulary) Fail(ErrorCode::kConfig, "WdE embedding needs a vocabulary");
      e.tables_.emplace_back(dim, vocabulary->size());
      break;
    case EmbeddingVariant::kSCE:
      for (std::size_t s : e.alphabet_sizes_) e.tables_.emplace_back(dim, s);
      break;
    case EmbeddingVariant::kICE:
      for (std::size_t s : e.alphabet_sizes_) e.tables_.emplace_back(1, s);
      break;
  }
  e.vocabulary_ = std::move(vocabulary);
  return e;
}

template <typename T>
Embedding<T> Embedding<T>::Create(EmbeddingVariant variant,
                                  std::span<const VariableSpec> specs,
                                  std::size_t dim,
                                  std::optional<Vocabulary> vocabulary,
                                  double init_scale, double ice_scale,
                                  std::mt19937_64& rng) {
  std::vector<std::size_t> sizes;
  std::vector<bool> ordered;
  for (const auto& spec : specs) {
    sizes.push_back(spec.alphabet_size);
    ordered.push_back(spec.ordered);
  }
  Embedding e = Shaped(variant, std::move(sizes), std::move(ordered), dim,
                       std::move(vocabulary));
  if (variant == EmbeddingVariant::kICE) {
    e.tables_ = IceInit<T>(specs, ice_scale, rng);
  } else {
    std::uniform_real_distribution<double> uniform(-init_scale, init_scale);
    for (auto& table : e.tables_) {
      for (auto& v : table.values()) v = static_cast<T>(uniform(rng));
    }
  }
  return e;
}

template <typename T>
std::size_t Embedding<T>::output_dim() const {
  return variant_ == EmbeddingVariant::kICE ? alphabet_sizes_.size() : dim_;
}

template <typename T>
std::size_t Embedding<T>::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

template <typename T>
void Embedding<T>::CheckInput(const SymbolSequence& input) const {
  if (input.steps() == 0) Fail(ErrorCode::kEmptySequence, "empty input sequence");
  if (input.arity != alphabet_sizes_.size()) {
    Fail(ErrorCode::kShapeMismatch,
         "input has " + std::to_string(input.arity) + " variables, model expects " +
             std::to_string(alphabet_sizes_.size()));
  }
}

template <typename T>
Tensor<T> Embedding<T>::Forward(const SymbolSequence& input,
                                EmbeddingCache& cache) const {
  CheckInput(input);
  switch (variant_) {
    case EmbeddingVariant::kWdE:
      cache.word_indices = vocabulary_->Encode(input);
      return WdeForward<T>(cache.word_indices, tables_[0]);
    case EmbeddingVariant::kSCE:
      return SceForward<T>(input, tables_);
    case EmbeddingVariant::kICE:
      return IceForward<T>(input, tables_);
  }
  Fail(ErrorCode::kConfig, "unknown embedding variant");
}

template <typename T>
void Embedding<T>::Backward(const Tensor<T>& upstream, const SymbolSequence& input,
                            const EmbeddingCache& cache,
                            std::span<Tensor<T>> grads) const {
  if (grads.size() != tables_.size()) {
    Fail(ErrorCode::kShapeMismatch, "embedding gradient table count");
  }
  switch (variant_) {
    case EmbeddingVariant::kWdE:
      WdeBackward<T>(upstream, cache.word_indices, grads[0]);
      return;
    case EmbeddingVariant::kSCE:
      SceBackward<T>(upstream, input, grads);
      return;
    case EmbeddingVariant::kICE:
      IceBackward<T>(upstream, input, grads);
      return;
  }
}

template <typename T>
void Embedding<T>::Project() {
  if (variant_ == EmbeddingVariant::kICE) IceProject<T>(tables_, ordered_);
}

#define SYMEV_INSTANTIATE_EMBEDDINGS(T)                                            \
  template Tensor<T> WdeForward<T>(std::span<const std::size_t>, const Tensor<T>&); \
  template Tensor<T> SceForward<T>(const SymbolSequence&, std::span<const Tensor<T>>); \
  template Tensor<T> IceForward<T>(const SymbolSequence&, std::span<const Tensor<T>>); \
  template void WdeBackward<T>(const Tensor<T>&, std::span<const std::size_t>,      \
                               Tensor<T>&);                                        \
  template void SceBackward<T>(const Tensor<T>&, const SymbolSequence&,             \
                               std::span<Tensor<T>>);                              \
  template void IceBackward<T>(const Tensor<T>&, const SymbolSequence&,             \
                               std::span<Tensor<T>>);                              \
  template void IceProject<T>(std::span<Tensor<T>>, const std::vector<bool>&);      \
  template std::vector<Tensor<T>> IceInit<T>(std::span<const VariableSpec>, double, \
                                             std::mt19937_64&);                    \
  template class Embedding<T>;

SYMEV_INSTANTIATE_EMBEDDINGS(float)
SYMEV_INSTANTIATE_EMBEDDINGS(double)

#undef SYMEV_INSTANTIATE_EMBEDDINGS

}  // namespace symev
