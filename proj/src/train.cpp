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

#include "symev/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "symev/errors.hpp"
#include "symev/kernels.hpp"
#include "symev/metrics.hpp"

namespace symev {

std::vector<std::vector<std::size_t>> MakeBatches(std::span<const LabeledSample> samples,
                                                  std::size_t batch_size,
                                                  std::mt19937_64& rng) {
  if (batch_size == 0) Fail(ErrorCode::kConfig, "batch_size must be >= 1");
  std::map<std::size_t, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    buckets[samples[i].input.steps()].push_back(i);
  }
  std::vector<std::vector<std::size_t>> batches;
  for (auto& [length, members] : buckets) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i = 0; i < members.size(); i += batch_size) {
      const std::size_t end = std::min(i + batch_size, members.size());
      batches.emplace_back(members.begin() + static_cast<std::ptrdiff_t>(i),
                           members.begin() + static_cast<std::ptrdiff_t>(end));
    }
  }
  std::shuffle(batches.begin(), batches.end(), rng);
  return batches;
}

namespace {

template <typename T>
std::vector<Tensor<T>> Snapshot(const Network<T>& net) {
  std::vector<Tensor<T>> out;
  for (const Tensor<T>* p : net.Parameters()) out.push_back(*p);
  return out;
}

template <typename T>
void Restore(Network<T>& net, const std::vector<Tensor<T>>& snapshot) {
  auto params = net.Parameters();
  for (std::size_t k = 0; k < params.size(); ++k) *params[k] = snapshot[k];
}

bool HasBothClasses(std::span<const LabeledSample> samples) {
  bool pos = false;
  bool neg = false;
  for (const auto& s : samples) (s.target == 1 ? pos : neg) = true;
  return pos && neg;
}

}  // namespace

template <typename T>
TrainResult Train(Network<T>& net, std::span<const LabeledSample> train,
                  std::span<const LabeledSample> validation, const TrainConfig& cfg,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  if (train.empty()) Fail(ErrorCode::kEmptyDataset, "no training samples");
  double weight_total = 0.0;
  for (const auto& s : train) {
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) {
      Fail(ErrorCode::kData, "sample weights must be finite and non-negative");
    }
    weight_total += s.weight;
  }
  if (!(weight_total > 0.0)) Fail(ErrorCode::kData, "training weights sum to zero");
  const double mean_weight = weight_total / static_cast<double>(train.size());

  std::mt19937_64 rng(cfg.seed);
  AdamState<T> adam = MakeAdamState<T>(net.Parameters());
  std::vector<Tensor<T>> grads = net.ZeroGradients();
  const bool use_validation = !validation.empty() && HasBothClasses(validation);
  std::vector<int> val_labels;
  for (const auto& s : validation) val_labels.push_back(s.target);

  TrainResult result;
  std::vector<Tensor<T>> best_params;
  double best_auc = -1.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const auto batches = MakeBatches(train, cfg.batch_size, rng);
    double epoch_loss = 0.0;
    double epoch_weight = 0.0;
    for (const auto& batch : batches) {
      const T normalizer = static_cast<T>(mean_weight * static_cast<double>(batch.size()));
      const auto step = BatchGradient(net, train, batch, normalizer, grads, cfg.exec);
      if (!std::isfinite(static_cast<double>(step.weighted_loss))) {
        const auto& origin = train[batch.front()].origin;
        Fail(ErrorCode::kNonFiniteLoss,
             "epoch " + std::to_string(epoch) + ", batch starting at entity '" +
                 origin.entity_id + "' clip " + std::to_string(origin.clip_index));
      }
      epoch_loss += static_cast<double>(step.weighted_loss);
      epoch_weight += static_cast<double>(step.weight);
      AdamStep<T>(net.Parameters(), grads, adam, net.config().optimizer);
      net.ProjectConstraints();
      ++result.steps;
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_weight > 0.0 ? epoch_loss / epoch_weight : 0.0;
    if (use_validation) {
      const std::vector<T> raw = PredictBatch(net, validation, cfg.exec);
      const std::vector<double> scores(raw.begin(), raw.end());
      record.val_auc = Auc(scores, val_labels);
      record.val_balanced_accuracy =
          BalancedAccuracyAtFpr(scores, val_labels, cfg.max_fpr).balanced_accuracy;
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);

    if (!use_validation) {
      result.best_epoch = epoch;
      continue;
    }
    if (*record.val_auc > best_auc) {
      best_auc = *record.val_auc;
      best_params = Snapshot(net);
      result.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      break;
    }
  }
  if (use_validation && !best_params.empty()) Restore(net, best_params);
  if (!result.history.empty()) {
    result.final_loss = result.history[result.best_epoch - 1].train_loss;
  }
  return result;
}

template TrainResult Train<float>(Network<float>&, std::span<const LabeledSample>,
                                  std::span<const LabeledSample>, const TrainConfig&,
                                  const std::function<void(const EpochRecord&)>&);
template TrainResult Train<double>(Network<double>&, std::span<const LabeledSample>,
                                   std::span<const LabeledSample>, const TrainConfig&,
                                   const std::function<void(const EpochRecord&)>&);

}  // namespace symev
