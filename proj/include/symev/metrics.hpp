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

#ifndef SYMEV_METRICS_HPP_
#define SYMEV_METRICS_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace symev {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Scores >= threshold are called positive. +inf for the (0, 0) point.
  double threshold = std::numeric_limits<double>::infinity();
  std::size_t false_positives = 0;
  std::size_t true_positives = 0;
};

struct OperatingPoint {
  double balanced_accuracy = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
  double fpr = 0.0;
  double tpr = 0.0;
};

// Throws kSingleClassDataset unless both labels occur; labels are 0/1.
std::vector<RocPoint> RocCurve(std::span<const double> scores, std::span<const int> labels);

// Trapezoidal area under the tie-grouped ROC curve. Evaluated in integer
// pair units, so it equals (wins + ties / 2) / (P * N) exactly.
double Auc(std::span<const double> scores, std::span<const int> labels);

// ROC point with fpr <= max_fpr maximising tpr; ties go to the lowest fpr and
// then the highest threshold.
OperatingPoint BalancedAccuracyAtFpr(std::span<const double> scores,
                                     std::span<const int> labels, double max_fpr);

// Balanced accuracy when scores >= threshold are called positive.
OperatingPoint BalancedAccuracyAt(std::span<const double> scores,
                                  std::span<const int> labels, double threshold);

}  // namespace symev

#endif  // SYMEV_METRICS_HPP_
