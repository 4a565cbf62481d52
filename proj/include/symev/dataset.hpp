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

// CSV ingestion, channel preparation, entity splits and the symbolized
// dataset file.
//
// Input CSV is long format: one row per (entity, clip, step) with one column
// per declared source variable and the clip's event label repeated on every
// row of the clip.

#ifndef SYMEV_DATASET_HPP_
#define SYMEV_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "symev/labeling.hpp"
#include "symev/network.hpp"
#include "symev/partitioning.hpp"
#include "symev/sequence.hpp"

namespace symev {

struct VariableConfig {
  std::string name;
  VariableKind kind = VariableKind::kContinuous;
  std::size_t alphabet_size = 0;
  SplitMethod method = SplitMethod::kMaxEntropy;
  std::vector<double> fixed_splits;           // used as-is when non-empty
  std::vector<std::string> fixed_categories;  // categorical; learned when empty
  bool ordered = false;                       // categorical only
  bool unknown_slot = false;                  // categorical only
  // Derived channel: |x[n] - x[n-1]| of `derived_from` over the entity's
  // time-ordered steps, 0 at the first step.
  std::string derived_from;
};

// Per-clip reduction of long clips to a fixed number of steps.
enum class Downsample { kNone, kStride, kMean };

struct Schema {
  std::string entity_column = "entity_id";
  std::string clip_column = "clip_index";
  std::string step_column = "step_index";
  std::string event_column = "event_label";
  std::vector<VariableConfig> variables;
  std::size_t histogram_bins = 20;
  Downsample downsample = Downsample::kNone;
  std::size_t downsample_length = 0;  // clips longer than this are reduced

  static Schema FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
  std::size_t arity() const { return variables.size(); }
};

struct RawClip {
  std::int64_t clip_index = 0;
  int event_label = 0;
  // cells[step][variable]; derived variables hold nullopt.
  std::vector<std::vector<std::optional<std::string>>> cells;
};

struct RawEntity {
  std::string id;
  std::vector<RawClip> clips;  // ascending clip_index
};

struct RawDataset {
  std::vector<RawEntity> entities;  // ascending id
};

RawDataset ReadCsv(std::istream& in, const Schema& schema);
RawDataset ReadCsv(const std::filesystem::path& path, const Schema& schema);

// Imputed, derived channels of one entity over its concatenated steps.
struct PreparedEntity {
  std::string id;
  std::vector<std::int64_t> clip_index;
  std::vector<int> events;
  std::vector<std::size_t> clip_begin;                 // step offset per clip, plus end
  std::vector<std::vector<double>> numeric;            // per variable (continuous)
  std::vector<std::vector<std::string>> categorical;   // per variable (categorical)
  std::vector<std::vector<std::optional<std::string>>> raw;  // per step, per variable
};

// Step ranges [begin, end) that each output step of an n-step clip covers.
std::vector<std::pair<std::size_t, std::size_t>> DownsampleWindows(std::size_t n,
                                                                   std::size_t length);

PreparedEntity PrepareEntity(const RawEntity& entity, const Schema& schema);
std::vector<PreparedEntity> PrepareAll(const RawDataset& data, const Schema& schema,
                                       Exec exec = Exec::kParallel);

// Learns one VariableSpec per schema variable from the given entities.
std::vector<VariableSpec> LearnPartition(std::span<const PreparedEntity> entities,
                                         const Schema& schema);

ClipSequence SymbolizeEntity(const PreparedEntity& entity,
                             std::span<const VariableSpec> specs, SymbolizeMode mode);

namespace serial {
std::vector<ClipSequence> SymbolizeEntities(std::span<const PreparedEntity> entities,
                                            std::span<const VariableSpec> specs,
                                            SymbolizeMode mode);
}  // namespace serial

namespace omp {
std::vector<ClipSequence> SymbolizeEntities(std::span<const PreparedEntity> entities,
                                            std::span<const VariableSpec> specs,
                                            SymbolizeMode mode);
}  // namespace omp

struct EntitySplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

// Seeded shuffle of the entity ids, cut into test, validation and train parts.
// Every id lands in exactly one part.
EntitySplit SplitEntities(std::vector<std::string> ids, double val_fraction,
                          double test_fraction, std::uint64_t seed);

std::vector<ClipSequence> SelectEntities(std::span<const ClipSequence> sequences,
                                         std::span<const std::string> ids);

// Symbolized dataset file: a JSON header line followed by one JSON record per
// clip.
struct SymbolizedFile {
  nlohmann::json header;
  std::vector<ClipSequence> sequences;
};

std::string WriteSymbolized(const nlohmann::json& header,
                            std::span<const ClipSequence> sequences);
SymbolizedFile ReadSymbolized(std::string_view text);

}  // namespace symev

#endif  // SYMEV_DATASET_HPP_
