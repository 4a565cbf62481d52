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

// Symbolization of raw channels: split learning for continuous variables,
// category maps for discrete ones, and gap imputation.

#ifndef SYMEV_PARTITIONING_HPP_
#define SYMEV_PARTITIONING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace symev {

using Symbol = std::uint32_t;

enum class VariableKind { kContinuous, kCategorical };

enum class SplitMethod { kUniform, kMaxEntropy, kJenks };

// Reserved category label that absorbs unseen categories at inference time
// when a categorical spec is built with an unknown slot.
inline constexpr std::string_view kUnknownLabel = "<UNK>";

struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::kContinuous;
  std::size_t alphabet_size = 0;
  std::vector<double> splits;            // continuous only, ascending
  std::vector<std::string> categories;   // categorical only
  bool ordered = true;
  bool unknown_slot = false;

  static VariableSpec Continuous(std::string name, std::vector<double> splits);
  static VariableSpec Categorical(std::string name,
                                  std::vector<std::string> categories,
                                  bool ordered = false,
                                  bool unknown_slot = false);

  // Throws kConfig when an invariant of the spec does not hold.
  void Validate() const;

  bool operator==(const VariableSpec&) const = default;
};

enum class SymbolizeMode { kTraining, kInference };

// Split learners. Each returns alphabet_size - 1 ascending thresholds.
std::vector<double> UniformSplits(std::span<const double> values,
                                  std::size_t alphabet_size);
std::vector<double> MaxEntropySplits(std::span<const double> values,
                                     std::size_t alphabet_size);
std::vector<double> JenksSplits(std::span<const double> values,
                                std::size_t alphabet_size);
std::vector<double> LearnSplits(SplitMethod method,
                                std::span<const double> values,
                                std::size_t alphabet_size);

// Percentile of sorted data by linear interpolation between order statistics,
// position q * (n - 1).
double InterpolatedPercentile(std::span<const double> sorted, double q);

// Number of splits at or below `value`; values equal to a split land in the
// higher cell.
Symbol SymbolizeContinuous(double value, std::span<const double> splits);

Symbol SymbolizeValue(double value, const VariableSpec& spec);
Symbol SymbolizeValue(std::string_view category, const VariableSpec& spec,
                      SymbolizeMode mode = SymbolizeMode::kTraining);

// Linear interpolation of interior gaps against `timestamps` (or positions
// when empty); leading and trailing gaps take the nearest observed value.
std::vector<double> InterpolateMissing(
    std::span<const std::optional<double>> values,
    std::span<const double> timestamps = {});

// Carry-forward with first-value backfill.
std::vector<std::string> InterpolateMissing(
    std::span<const std::optional<std::string>> values);

struct Histogram {
  std::vector<double> edges;           // continuous: bins + 1 edges
  std::vector<std::string> labels;     // categorical: one per category
  std::vector<std::size_t> counts;
};

Histogram ContinuousHistogram(std::span<const double> values, std::size_t bins);
Histogram CategoricalHistogram(std::span<const std::string> values);

}  // namespace symev

#endif  // SYMEV_PARTITIONING_HPP_
