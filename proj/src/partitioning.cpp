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

#include "symev/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "symev/errors.hpp"

namespace symev {

namespace {

void CheckAlphabet(std::size_t alphabet_size) {
  if (alphabet_size < 2) {
    Fail(ErrorCode::kInvalidAlphabet,
         "alphabet size must be at least 2, got " +
             std::to_string(alphabet_size));
  }
}

std::vector<double> SortedCopy(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kEmptyDataset, "no values to partition");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) Fail(ErrorCode::kData, "non-finite value in channel");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

VariableSpec VariableSpec::Continuous(std::string name,
                                      std::vector<double> splits) {
  VariableSpec spec;
  spec.name = std::move(name);
  spec.kind = VariableKind::kContinuous;
  spec.alphabet_size = splits.size() + 1;
  spec.splits = std::move(splits);
  spec.ordered = true;
  return spec;
}

VariableSpec VariableSpec::Categorical(std::string name,
                                       std::vector<std::string> categories,
                                       bool ordered, bool unknown_slot) {
  VariableSpec spec;
  spec.name = std::move(name);
  spec.kind = VariableKind::kCategorical;
  if (unknown_slot &&
      std::find(categories.begin(), categories.end(), kUnknownLabel) ==
          categories.end()) {
    categories.emplace_back(kUnknownLabel);
  }
  spec.alphabet_size = categories.size();
  spec.categories = std::move(categories);
  spec.ordered = ordered;
  spec.unknown_slot = unknown_slot;
  return spec;
}

void VariableSpec::Validate() const {
  if (alphabet_size < 2) {
    Fail(ErrorCode::kConfig, "variable '" + name + "': alphabet size < 2");
  }
  if (kind == VariableKind::kContinuous) {
    if (splits.size() + 1 != alphabet_size) {
      Fail(ErrorCode::kConfig,
           "variable '" + name + "': expected " +
               std::to_string(alphabet_size - 1) + " splits");
    }
    for (std::size_t k = 1; k < splits.size(); ++k) {
      if (!(splits[k - 1] < splits[k])) {
        Fail(ErrorCode::kConfig,
             "variable '" + name + "': splits not strictly ascending");
      }
    }
    if (!categories.empty()) {
      Fail(ErrorCode::kConfig,
           "variable '" + name + "': continuous spec carries categories");
    }
  } else {
    if (categories.size() != alphabet_size) {
      Fail(ErrorCode::kConfig,
           "variable '" + name + "': category count != alphabet size");
    }
    std::set<std::string> seen(categories.begin(), categories.end());
    if (seen.size() != categories.size()) {
      Fail(ErrorCode::kConfig,
           "variable '" + name + "': duplicate category labels");
    }
    if (!splits.empty()) {
      Fail(ErrorCode::kConfig,
           "variable '" + name + "': categorical spec carries splits");
    }
  }
}

std::vector<double> UniformSplits(std::span<const double> values,
                                  std::size_t alphabet_size) {
  CheckAlphabet(alphabet_size);
  if (values.empty()) Fail(ErrorCode::kEmptyDataset, "no values to partition");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) {
    Fail(ErrorCode::kDegenerateRange, "all values equal to " + std::to_string(lo));
  }
  std::vector<double> splits(alphabet_size - 1);
  const double width = (hi - lo) / static_cast<double>(alphabet_size);
  for (std::size_t k = 1; k < alphabet_size; ++k) {
    splits[k - 1] = lo + static_cast<double>(k) * width;
  }
  return splits;
}

double InterpolatedPercentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) Fail(ErrorCode::kEmptyDataset, "percentile of empty set");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(below);
  if (below + 1 >= sorted.size() || frac == 0.0) return sorted[below];
  return sorted[below] + frac * (sorted[below + 1] - sorted[below]);
}

std::vector<double> MaxEntropySplits(std::span<const double> values,
                                     std::size_t alphabet_size) {
  CheckAlphabet(alphabet_size);
  const std::vector<double> sorted = SortedCopy(values);
  if (!(sorted.back() > sorted.front())) {
    Fail(ErrorCode::kDegenerateRange,
         "all values equal to " + std::to_string(sorted.front()));
  }
  std::vector<double> splits(alphabet_size - 1);
  for (std::size_t k = 1; k < alphabet_size; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(alphabet_size);
    splits[k - 1] = InterpolatedPercentile(sorted, q);
    const double previous = k == 1 ? sorted.front() : splits[k - 2];
    // A split at the minimum (or repeating the previous split) leaves an
    // empty cell under the higher-cell boundary rule.
    if (!(splits[k - 1] > previous)) {
      Fail(ErrorCode::kCollapsedCells,
           "percentile " + std::to_string(100.0 * q) +
               " coincides with its lower neighbour at " +
               std::to_string(splits[k - 1]) + "; lower the alphabet size");
    }
  }
  return splits;
}

std::vector<double> JenksSplits(std::span<const double> values,
                                std::size_t alphabet_size) {
  CheckAlphabet(alphabet_size);
  const std::vector<double> sorted = SortedCopy(values);

  // Collapse duplicates into weighted points; equal values never straddle a
  // threshold.
  std::vector<double> points;
  std::vector<double> weights;
  for (double v : sorted) {
    if (points.empty() || points.back() != v) {
      points.push_back(v);
      weights.push_back(1.0);
    } else {
      weights.back() += 1.0;
    }
  }
  const std::size_t n = points.size();
  const std::size_t cells = alphabet_size;
  if (n < cells) {
    Fail(ErrorCode::kTooFewDistinct,
         std::to_string(n) + " distinct values for alphabet size " +
             std::to_string(cells));
  }

  const double shift = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                       static_cast<double>(sorted.size());
  std::vector<double> cw(n + 1, 0.0), cx(n + 1, 0.0), cxx(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = points[i] - shift;
    cw[i + 1] = cw[i] + weights[i];
    cx[i + 1] = cx[i] + weights[i] * x;
    cxx[i + 1] = cxx[i] + weights[i] * x * x;
  }
  // Within-cell SSE of points [a, b).
  auto sse = [&](std::size_t a, std::size_t b) {
    const double w = cw[b] - cw[a];
    const double sx = cx[b] - cx[a];
    return std::max(0.0, (cxx[b] - cxx[a]) - sx * sx / w);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[c][b]: best SSE of points [0, b) in c + 1 cells; start[c][b] is the
  // first point of the last cell.
  std::vector<std::vector<double>> cost(cells, std::vector<double>(n + 1, kInf));
  std::vector<std::vector<std::size_t>> start(
      cells, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t b = 1; b <= n; ++b) cost[0][b] = sse(0, b);
  for (std::size_t c = 1; c < cells; ++c) {
    for (std::size_t b = c + 1; b <= n; ++b) {
      double best = kInf;
      std::size_t best_a = c;
      for (std::size_t a = c; a < b; ++a) {
        const double candidate = cost[c - 1][a] + sse(a, b);
        if (candidate < best) {
          best = candidate;
          best_a = a;
        }
      }
      cost[c][b] = best;
      start[c][b] = best_a;
    }
  }

  std::vector<double> splits(cells - 1);
  std::size_t end = n;
  for (std::size_t c = cells - 1; c >= 1; --c) {
    const std::size_t a = start[c][end];
    splits[c - 1] = 0.5 * (points[a - 1] + points[a]);
    end = a;
  }
  return splits;
}

std::vector<double> LearnSplits(SplitMethod method,
                                std::span<const double> values,
                                std::size_t alphabet_size) {
  switch (method) {
    case SplitMethod::kUniform: return UniformSplits(values, alphabet_size);
    case SplitMethod::kMaxEntropy: return MaxEntropySplits(values, alphabet_size);
    case SplitMethod::kJenks: return JenksSplits(values, alphabet_size);
  }
  Fail(ErrorCode::kConfig, "unknown split method");
}

Symbol SymbolizeContinuous(double value, std::span<const double> splits) {
  return static_cast<Symbol>(
      std::upper_bound(splits.begin(), splits.end(), value) - splits.begin());
}

Symbol SymbolizeValue(double value, const VariableSpec& spec) {
  if (spec.kind != VariableKind::kContinuous) {
    Fail(ErrorCode::kConfig,
         "numeric value given for categorical variable '" + spec.name + "'");
  }
  if (std::isnan(value)) {
    Fail(ErrorCode::kData, "missing value reached symbolization for '" +
                               spec.name + "'; impute first");
  }
  return SymbolizeContinuous(value, spec.splits);
}

Symbol SymbolizeValue(std::string_view category, const VariableSpec& spec,
                      SymbolizeMode mode) {
  if (spec.kind != VariableKind::kCategorical) {
    Fail(ErrorCode::kConfig,
         "category given for continuous variable '" + spec.name + "'");
  }
  const auto it =
      std::find(spec.categories.begin(), spec.categories.end(), category);
  if (it != spec.categories.end()) {
    return static_cast<Symbol>(it - spec.categories.begin());
  }
  if (mode == SymbolizeMode::kInference && spec.unknown_slot) {
    const auto unk =
        std::find(spec.categories.begin(), spec.categories.end(), kUnknownLabel);
    return static_cast<Symbol>(unk - spec.categories.begin());
  }
  Fail(ErrorCode::kUnknownCategory, "category '" + std::string(category) +
                                        "' not in variable '" + spec.name + "'");
}

std::vector<double> InterpolateMissing(
    std::span<const std::optional<double>> values,
    std::span<const double> timestamps) {
  const std::size_t n = values.size();
  if (!timestamps.empty() && timestamps.size() != n) {
    Fail(ErrorCode::kShapeMismatch, "timestamps and values differ in length");
  }
  auto position = [&](std::size_t i) {
    return timestamps.empty() ? static_cast<double>(i) : timestamps[i];
  };
  std::vector<std::size_t> observed;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i].has_value()) observed.push_back(i);
  }
  if (observed.empty()) Fail(ErrorCode::kAllMissing, "channel has no observed value");

  std::vector<double> out(n);
  for (std::size_t i = 0; i < observed.front(); ++i) out[i] = *values[observed.front()];
  for (std::size_t i = observed.back(); i < n; ++i) out[i] = *values[observed.back()];
  for (std::size_t k = 0; k + 1 < observed.size(); ++k) {
    const std::size_t a = observed[k];
    const std::size_t b = observed[k + 1];
    const double va = *values[a];
    const double vb = *values[b];
    out[a] = va;
    double ta = position(a);
    double tb = position(b);
    bool by_index = !(tb > ta);  // repeated timestamps: fall back to positions
    if (by_index) {
      ta = static_cast<double>(a);
      tb = static_cast<double>(b);
    }
    for (std::size_t i = a + 1; i < b; ++i) {
      const double ti = by_index ? static_cast<double>(i) : position(i);
      out[i] = va + (vb - va) * (ti - ta) / (tb - ta);
    }
  }
  return out;
}

std::vector<std::string> InterpolateMissing(
    std::span<const std::optional<std::string>> values) {
  const auto first = std::find_if(values.begin(), values.end(),
                                  [](const auto& v) { return v.has_value(); });
  if (first == values.end()) Fail(ErrorCode::kAllMissing, "channel has no observed value");
  std::vector<std::string> out;
  out.reserve(values.size());
  const std::string* last = &**first;
  for (const auto& v : values) {
    if (v.has_value()) last = &*v;
    out.push_back(*last);
  }
  return out;
}

Histogram ContinuousHistogram(std::span<const double> values, std::size_t bins) {
  Histogram h;
  if (values.empty() || bins == 0) return h;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);
  for (double v : values) {
    std::size_t k = hi > lo ? static_cast<std::size_t>((v - lo) / (hi - lo) *
                                                       static_cast<double>(bins))
                            : 0;
    ++h.counts[std::min(k, bins - 1)];
  }
  return h;
}

Histogram CategoricalHistogram(std::span<const std::string> values) {
  Histogram h;
  std::vector<std::string> labels(values.begin(), values.end());
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size();) {
    std::size_t j = i;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    h.labels.push_back(labels[i]);
    h.counts.push_back(j - i);
    i = j;
  }
  return h;
}

}  // namespace symev
