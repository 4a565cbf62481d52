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

#ifndef SYMEV_SEQUENCE_HPP_
#define SYMEV_SEQUENCE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symev/partitioning.hpp"

namespace symev {

// Step-major matrix of symbols: `steps()` rows of `arity` symbols each.
struct SymbolSequence {
  std::size_t arity = 0;
  std::vector<Symbol> symbols;

  SymbolSequence() = default;
  SymbolSequence(std::size_t arity_in, std::vector<Symbol> symbols_in)
      : arity(arity_in), symbols(std::move(symbols_in)) {}

  std::size_t steps() const { return arity == 0 ? 0 : symbols.size() / arity; }
  std::span<const Symbol> step(std::size_t n) const {
    return {symbols.data() + n * arity, arity};
  }
  void Append(const SymbolSequence& other) {
    symbols.insert(symbols.end(), other.symbols.begin(), other.symbols.end());
  }
  bool operator==(const SymbolSequence&) const = default;
};

// One observation window of a single entity.
struct SymbolizedClip {
  std::string entity_id;
  std::int64_t clip_index = 0;
  int event_label = 0;
  SymbolSequence symbols;
  // Raw cell text as ingested, step-major, nullopt for missing cells.
  std::vector<std::optional<std::string>> raw;

  bool operator==(const SymbolizedClip&) const = default;
};

}  // namespace symev

#endif  // SYMEV_SEQUENCE_HPP_
