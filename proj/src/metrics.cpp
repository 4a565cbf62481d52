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

#include "symev/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "symev/errors.hpp"

namespace symev {

namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts CheckScoredSet(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    Fail(ErrorCode::kShapeMismatch, "scores and labels differ in length");
  }
  ClassCounts counts;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) Fail(ErrorCode::kData, "labels must be 0 or 1");
    if (std::isnan(scores[i])) Fail(ErrorCode::kNonFiniteLoss, "NaN score");
    (labels[i] == 1 ? counts.positives : counts.negatives) += 1;
  }
  if (counts.positives == 0 || counts.negatives == 0) {
    Fail(ErrorCode::kSingleClassDataset,
         "ROC needs both classes (positives=" + std::to_string(counts.positives) +
             ", negatives=" + std::to_string(counts.negatives) + ")");
  }
  return counts;
}

}  // namespace

std::vector<RocPoint> RocCurve(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts counts = CheckScoredSet(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double p = static_cast<double>(counts.positives);
  const double n = static_cast<double>(counts.negatives);
  std::vector<RocPoint> curve;
  curve.push_back(RocPoint{});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    // Equal scores flip together.
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    curve.push_back(RocPoint{static_cast<double>(fp) / n, static_cast<double>(tp) / p,
                             threshold, fp, tp});
  }
  return curve;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  const auto curve = RocCurve(scores, labels);
  // Twice the area in units of (positive, negative) pairs.
  std::uint64_t doubled = 0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const std::uint64_t dfp = curve[k].false_positives - curve[k - 1].false_positives;
    doubled += dfp * (curve[k].true_positives + curve[k - 1].true_positives);
  }
  const std::uint64_t pairs = static_cast<std::uint64_t>(curve.back().true_positives) *
                              curve.back().false_positives;
  return static_cast<double>(doubled) / (2.0 * static_cast<double>(pairs));
}

OperatingPoint BalancedAccuracyAtFpr(std::span<const double> scores,
                                     std::span<const int> labels, double max_fpr) {
  if (!(max_fpr >= 0.0 && max_fpr < 1.0)) {
    Fail(ErrorCode::kConfig, "max_fpr must lie in [0, 1)");
  }
  const auto curve = RocCurve(scores, labels);
  const RocPoint* best = nullptr;
  for (const RocPoint& pt : curve) {
    if (pt.fpr > max_fpr) continue;
    if (best == nullptr || pt.tpr > best->tpr ||
        (pt.tpr == best->tpr &&
         (pt.fpr < best->fpr || (pt.fpr == best->fpr && pt.threshold > best->threshold)))) {
      best = &pt;
    }
  }
  // The (0, 0) point is always feasible.
  return OperatingPoint{(best->tpr + (1.0 - best->fpr)) / 2.0, best->threshold, best->fpr,
                        best->tpr};
}

OperatingPoint BalancedAccuracyAt(std::span<const double> scores,
                                  std::span<const int> labels, double threshold) {
  const ClassCounts counts = CheckScoredSet(scores, labels);
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= threshold) (labels[i] == 1 ? tp : fp) += 1;
  }
  const double tpr = static_cast<double>(tp) / static_cast<double>(counts.positives);
  const double fpr = static_cast<double>(fp) / static_cast<double>(counts.negatives);
  return OperatingPoint{(tpr + (1.0 - fpr)) / 2.0, threshold, fpr, tpr};
}

}  // namespace symev
