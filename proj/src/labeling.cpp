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

#include "symev/labeling.hpp"

#include <algorithm>

#include "symev/errors.hpp"

namespace symev {

void LabelingConfig::Validate() const {
  if (horizon < 1) Fail(ErrorCode::kConfig, "prediction horizon K must be >= 1");
}

std::vector<int> ClipSequence::EventLabels() const {
  std::vector<int> labels;
  labels.reserve(clips.size());
  for (const auto& clip : clips) labels.push_back(clip.event_label);
  return labels;
}

Targets DeriveTargets(std::span<const int> event_labels, std::size_t horizon) {
  if (horizon < 1) Fail(ErrorCode::kConfig, "prediction horizon K must be >= 1");
  const std::size_t n = event_labels.size();
  Targets out;
  out.y.assign(n, 0);
  out.truncated.assign(n, false);
  if (n == 0) return out;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t last = std::min(t + horizon, n - 1);
    int seen = 0;
    for (std::size_t j = t + 1; j <= last; ++j) seen += event_labels[j] != 0;
    out.y[t] = seen > 0 ? 1 : 0;
    out.truncated[t] = seen == 0 && t + horizon > n - 1;
  }
  return out;
}

std::vector<double> TemporalWeights(std::span<const int> event_labels,
                                    std::span<const int> targets,
                                    std::size_t horizon) {
  if (targets.size() != event_labels.size()) {
    Fail(ErrorCode::kShapeMismatch, "targets and event labels differ in length");
  }
  const std::size_t n = event_labels.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (targets[t] == 0) continue;
    double sum = 0.0;
    for (std::size_t j = 1; j <= horizon && t + j < n; ++j) {
      sum += static_cast<double>(horizon - j + 1) * event_labels[t + j];
    }
    w[t] = sum;
  }
  return w;
}

WeightSums SumWeights(std::span<const LabeledSample> samples) {
  WeightSums sums;
  for (const auto& s : samples) {
    if (s.target == 1) {
      sums.positive += s.weight;
      ++sums.n_positive;
    } else {
      sums.negative += s.weight;
      ++sums.n_negative;
    }
  }
  return sums;
}

std::vector<LabeledSample> RenormalizeWeights(std::vector<LabeledSample> samples) {
  const WeightSums sums = SumWeights(samples);
  if (sums.n_positive == 0 || sums.n_negative == 0) {
    Fail(ErrorCode::kSingleClassDataset,
         "renormalization needs both classes (positives=" +
             std::to_string(sums.n_positive) +
             ", negatives=" + std::to_string(sums.n_negative) + ")");
  }
  if (!(sums.positive > 0.0)) {
    Fail(ErrorCode::kSingleClassDataset, "positive samples carry zero weight");
  }
  const double scale = sums.negative / sums.positive;
  for (auto& s : samples) {
    if (s.target == 1) s.weight *= scale;
  }
  return samples;
}

std::vector<LabeledSample> WindowSamples(const ClipSequence& seq,
                                         const LabelingConfig& cfg) {
  cfg.Validate();
  const std::vector<int> labels = seq.EventLabels();
  const Targets targets = DeriveTargets(labels, cfg.horizon);
  const std::vector<double> weights =
      TemporalWeights(labels, targets.y, cfg.horizon);

  std::vector<LabeledSample> samples;
  for (std::size_t t = cfg.history; t < seq.clips.size(); ++t) {
    LabeledSample s;
    s.first_clip = t - cfg.history;
    s.input.arity = seq.clips[t].symbols.arity;
    for (std::size_t c = s.first_clip; c <= t; ++c) {
      if (seq.clips[c].symbols.arity != s.input.arity) {
        Fail(ErrorCode::kShapeMismatch, "clips of entity '" + seq.entity_id +
                                            "' disagree on variable count");
      }
      s.input.Append(seq.clips[c].symbols);
    }
    s.target = targets.y[t];
    s.truncated = targets.truncated[t];
    s.weight = s.target == 1 && cfg.use_temporal_weights ? weights[t] : 1.0;
    s.origin = {seq.entity_id, t, seq.clips[t].clip_index};
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<LabeledSample> WindowAll(std::span<const ClipSequence> sequences,
                                     const LabelingConfig& cfg,
                                     bool keep_truncated) {
  std::vector<LabeledSample> all;
  for (const auto& seq : sequences) {
    for (auto& s : WindowSamples(seq, cfg)) {
      if (s.truncated && !keep_truncated && !cfg.truncated_as_negative) continue;
      all.push_back(std::move(s));
    }
  }
  return all;
}

}  // namespace symev
