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

#ifndef SYMEV_TRAIN_HPP_
#define SYMEV_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "symev/labeling.hpp"
#include "symev/network.hpp"

namespace symev {

struct TrainConfig {
  std::size_t epochs = 20;
  // Samples per ADAM step; batches never mix input lengths.
  std::size_t batch_size = 1;
  // Epochs without a validation AUC improvement before stopping; 0 disables.
  std::size_t patience = 5;
  double max_fpr = 0.05;
  std::uint64_t seed = 0;
  Exec exec = Exec::kParallel;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  std::optional<double> val_auc;
  std::optional<double> val_balanced_accuracy;
  double wall_ms = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double final_loss = 0.0;
  std::uint64_t steps = 0;
};

// Fits `net` in place with weighted cross entropy and ADAM. Each sample's
// gradient is scaled by weight / mean training weight. On return the network
// holds the parameters of the best validation epoch (last epoch when there
// is no usable validation set).
template <typename T>
TrainResult Train(Network<T>& net, std::span<const LabeledSample> train,
                  std::span<const LabeledSample> validation, const TrainConfig& cfg,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// Mini-batches of equal-length samples in a seeded random order.
std::vector<std::vector<std::size_t>> MakeBatches(std::span<const LabeledSample> samples,
                                                  std::size_t batch_size,
                                                  std::mt19937_64& rng);

}  // namespace symev

#endif  // SYMEV_TRAIN_HPP_
