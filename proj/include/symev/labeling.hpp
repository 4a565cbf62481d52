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

// Event labels to weighted binary-classification samples.
//
// Clip indices are zero based. For clip t, the target looks at the K clips
// t+1 .. t+K and the temporal weight sums (K - j + 1) * l[t + j] over them.

#ifndef SYMEV_LABELING_HPP_
#define SYMEV_LABELING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "symev/sequence.hpp"

namespace symev {

struct LabelingConfig {
  std::size_t horizon = 1;   // K
  std::size_t history = 0;   // M
  bool use_temporal_weights = true;
  // Keep samples whose horizon runs past the end of the sequence without an
  // observed event, labelled negative. Dropped by default.
  bool truncated_as_negative = false;

  void Validate() const;
};

struct ClipSequence {
  std::string entity_id;
  std::vector<SymbolizedClip> clips;

  std::vector<int> EventLabels() const;
};

struct Targets {
  std::vector<int> y;
  // Horizon extends past the last clip and no event was seen in the visible
  // part, so the label is unknown.
  std::vector<bool> truncated;
};

struct SampleOrigin {
  std::string entity_id;
  std::size_t t = 0;              // position of the current clip in the sequence
  std::int64_t clip_index = 0;    // clip index as ingested
};

struct LabeledSample {
  SymbolSequence input;           // clips t - M .. t concatenated along time
  std::size_t first_clip = 0;     // position of clip t - M
  int target = 0;
  double weight = 1.0;
  bool truncated = false;
  SampleOrigin origin;
};

Targets DeriveTargets(std::span<const int> event_labels, std::size_t horizon);

std::vector<double> TemporalWeights(std::span<const int> event_labels,
                                    std::span<const int> targets,
                                    std::size_t horizon);

struct WeightSums {
  double positive = 0.0;
  double negative = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
};

WeightSums SumWeights(std::span<const LabeledSample> samples);

// Scales positive weights so both classes carry the same total weight.
std::vector<LabeledSample> RenormalizeWeights(std::vector<LabeledSample> samples);

std::vector<LabeledSample> WindowSamples(const ClipSequence& seq,
                                         const LabelingConfig& cfg);

// Windows several sequences; training mode drops truncated samples unless the
// config keeps them, inference mode keeps everything.
std::vector<LabeledSample> WindowAll(std::span<const ClipSequence> sequences,
                                     const LabelingConfig& cfg,
                                     bool keep_truncated = false);

}  // namespace symev

#endif  // SYMEV_LABELING_HPP_
