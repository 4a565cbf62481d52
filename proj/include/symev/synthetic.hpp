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

// Synthetic heterogeneous datasets with a planted pre-event motif, plus the
// two-variable partition demo.

#ifndef SYMEV_SYNTHETIC_HPP_
#define SYMEV_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "symev/dataset.hpp"
#include "symev/embeddings.hpp"

namespace symev {

// Entities emit clips of 3 continuous and 2 categorical channels. A failing
// entity has its event on the last clip; the `motif_clips` clips before it
// carry the motif (high level on channel 0, a rising ramp on channel 1 and
// the "fault" status).
struct SyntheticConfig {
  std::size_t entities = 50;
  std::size_t clips_per_entity = 40;
  std::size_t min_steps = 6;
  std::size_t max_steps = 10;
  double failing_fraction = 0.6;
  std::size_t motif_clips = 3;
  double missing_rate = 0.02;
  std::uint64_t seed = 1;
};

Schema SyntheticSchema();
std::string SyntheticCsv(const SyntheticConfig& cfg);

// Pipeline configuration for the synthetic set with K = 3, M = 2.
nlohmann::json SyntheticPipelineJson(EmbeddingVariant variant, const std::string& csv_path,
                                     std::uint64_t seed);

// Continuous Z1 spanning [0, 14] with a 2-symbol uniform partition and a
// categorical Z2 with 5 categories.
Schema Figure2Schema();
std::string Figure2Csv();

}  // namespace symev

#endif  // SYMEV_SYNTHETIC_HPP_
