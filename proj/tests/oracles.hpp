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

// Independent reference implementations used by the unit and acceptance
// tests. Each one is written from the definition, without sharing code with
// the library routine it checks.

#ifndef SYMEV_TESTS_ORACLES_HPP_
#define SYMEV_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "symev/network.hpp"
#include "symev/sequence.hpp"

namespace symev::oracle {

// y_t and truncation flag from the horizon definition, by direct scan.
struct TargetOracle {
  std::vector<int> y;
  std::vector<bool> truncated;
};

inline TargetOracle Targets(const std::vector<int>& l, std::size_t k) {
  TargetOracle out;
  const std::size_t n = l.size();
  for (std::size_t t = 0; t < n; ++t) {
    int sum = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      if (t + j < n) sum += l[t + j];
    }
    out.y.push_back(sum > 0 ? 1 : 0);
    out.truncated.push_back(sum == 0 && t + k > n - 1);
  }
  return out;
}

// Temporal weight by double loop over the horizon and the weight ladder.
inline std::vector<long long> Weights(const std::vector<int>& l, std::size_t k) {
  const auto y = Targets(l, k).y;
  std::vector<long long> w(l.size(), 1);
  for (std::size_t t = 0; t < l.size(); ++t) {
    if (!y[t]) continue;
    long long total = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      if (t + j >= l.size() || !l[t + j]) continue;
      for (std::size_t rung = j; rung <= k; ++rung) total += 1;  // K - j + 1 terms
    }
    w[t] = total;
  }
  return w;
}

// Mann-Whitney statistic by comparing every positive with every negative.
inline double PairCountAuc(std::span<const double> scores, std::span<const int> labels) {
  long long twice = 0;
  long long pos = 0;
  long long neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i]) ++pos; else ++neg;
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      if (scores[i] > scores[j]) twice += 2;
      else if (scores[i] == scores[j]) twice += 1;
    }
  }
  return static_cast<double>(twice) / static_cast<double>(2 * pos * neg);
}

// Best balanced accuracy over every candidate threshold (each distinct score
// and +inf) whose false positive rate stays within the cap. Ties prefer the
// lower false positive rate, then the higher threshold.
struct SweepResult {
  double balanced_accuracy = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
  double fpr = 0.0;
  double tpr = 0.0;
};

inline SweepResult ThresholdSweep(std::span<const double> scores, std::span<const int> labels,
                                  double max_fpr) {
  std::set<double> candidates(scores.begin(), scores.end());
  candidates.insert(std::numeric_limits<double>::infinity());
  double pos = 0;
  double neg = 0;
  for (int y : labels) (y ? pos : neg) += 1;
  SweepResult best;
  bool have = false;
  for (double thr : candidates) {
    double tp = 0;
    double fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= thr) (labels[i] ? tp : fp) += 1;
    }
    const double fpr = fp / neg;
    const double tpr = tp / pos;
    if (fpr > max_fpr) continue;
    const bool better = !have || tpr > best.tpr || (tpr == best.tpr && fpr < best.fpr) ||
                        (tpr == best.tpr && fpr == best.fpr && thr > best.threshold);
    if (better) {
      best = {(tpr + (1.0 - fpr)) / 2.0, thr, fpr, tpr};
      have = true;
    }
  }
  return best;
}

// Within-cell sum of squared deviations when `sorted` is cut before the given
// positions.
inline double SegmentSse(const std::vector<double>& sorted, const std::vector<std::size_t>& cuts) {
  double total = 0.0;
  std::size_t begin = 0;
  auto bounds = cuts;
  bounds.push_back(sorted.size());
  for (std::size_t end : bounds) {
    double mean = 0.0;
    for (std::size_t i = begin; i < end; ++i) mean += sorted[i];
    mean /= static_cast<double>(end - begin);
    for (std::size_t i = begin; i < end; ++i) total += (sorted[i] - mean) * (sorted[i] - mean);
    begin = end;
  }
  return total;
}

// SSE of the cells induced by thresholds (value >= split goes up).
inline double SplitSse(std::vector<double> values, const std::vector<double>& splits) {
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> cuts;
  for (double s : splits) {
    cuts.push_back(static_cast<std::size_t>(
        std::lower_bound(values.begin(), values.end(), s) - values.begin()));
  }
  return SegmentSse(values, cuts);
}

struct JenksOracle {
  double sse = std::numeric_limits<double>::infinity();
  std::vector<double> splits;
  // Cut placements reaching the minimum (within rounding).
  std::size_t optima = 0;
};

// Exhaustive search over every placement of alphabet_size - 1 cuts between
// distinct adjacent sorted values.
inline JenksOracle ExhaustiveJenks(std::vector<double> values, std::size_t alphabet_size) {
  std::sort(values.begin(), values.end());
  std::vector<std::size_t> positions;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] != values[i - 1]) positions.push_back(i);
  }
  JenksOracle best;
  const std::size_t k = alphabet_size - 1;
  if (positions.size() < k) return best;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<std::size_t> cuts;
    for (std::size_t p : pick) cuts.push_back(positions[p]);
    const double sse = SegmentSse(values, cuts);
    const double tol = 1e-9 * (1.0 + std::min(sse, best.sse));
    if (sse < best.sse - tol) {
      best.sse = sse;
      best.optima = 1;
      best.splits.clear();
      for (std::size_t c : cuts) best.splits.push_back((values[c - 1] + values[c]) / 2.0);
    } else if (sse <= best.sse + tol) {
      ++best.optima;
    }
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == positions.size() - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Loss of a batch, sum_i scale_i * BCE_i, evaluated by forward passes only.
template <typename T>
T BatchLoss(const Network<T>& net, std::span<const SymbolSequence> inputs,
            std::span<const int> targets, std::span<const T> scales) {
  T total = T(0);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const T p = net.Predict(inputs[i]);
    total += scales[i] * (targets[i] ? -std::log(p) : -std::log(T(1) - p));
  }
  return total;
}

struct GradientReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;
};

// Central finite differences against Network::Accumulate for every parameter.
inline GradientReport CheckNetworkGradients(Network<double>& net,
                                            std::span<const SymbolSequence> inputs,
                                            std::span<const int> targets,
                                            std::span<const double> scales,
                                            double step = 1e-5) {
  auto grads = net.ZeroGradients();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    net.Accumulate(inputs[i], targets[i], scales[i], grads);
  }
  GradientReport report;
  auto params = net.Parameters();
  const auto names = net.ParameterNames();
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t k = 0; k < params[p]->size(); ++k) {
      double& x = (*params[p])[k];
      const double saved = x;
      x = saved + step;
      const double up = BatchLoss<double>(net, inputs, targets, scales);
      x = saved - step;
      const double down = BatchLoss<double>(net, inputs, targets, scales);
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = grads[p][k];
      const double denom = std::max({std::abs(numeric) + std::abs(analytic), 1e-4});
      const double rel = std::abs(numeric - analytic) / denom;
      ++report.checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst = names[p] + "[" + std::to_string(k) + "]";
      }
    }
  }
  return report;
}

inline SymbolSequence RandomSequence(std::span<const std::size_t> alphabet, std::size_t steps,
                                     std::mt19937_64& rng) {
  SymbolSequence s;
  s.arity = alphabet.size();
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t a : alphabet) {
      s.symbols.push_back(static_cast<Symbol>(std::uniform_int_distribution<std::size_t>(0, a - 1)(rng)));
    }
  }
  return s;
}

}  // namespace symev::oracle

#endif  // SYMEV_TESTS_ORACLES_HPP_
