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

// Pipeline configuration and the partition, symbolize, train, evaluate and
// predict steps behind the command-line tool.

#ifndef SYMEV_PIPELINE_HPP_
#define SYMEV_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "symev/dataset.hpp"
#include "symev/labeling.hpp"
#include "symev/metrics.hpp"
#include "symev/network.hpp"
#include "symev/train.hpp"

namespace symev {

struct SplitConfig {
  double val_fraction = 0.15;
  double test_fraction = 0.2;
};

struct PipelineConfig {
  std::filesystem::path csv;
  Schema schema;
  LabelingConfig labeling;
  NetworkConfig network;
  TrainConfig training;
  SplitConfig split;
  double max_fpr = 0.05;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";

  // Relative paths resolve against `base_dir`.
  static PipelineConfig FromJson(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir);
  static PipelineConfig Load(const std::filesystem::path& path);

  void SetSeed(std::uint64_t value);

  // Canonical form of every setting that affects results; file locations are
  // left out.
  nlohmann::json ToJson() const;
  std::string Digest() const;

  std::filesystem::path PartitionPath() const { return output_dir / "partition.json"; }
  std::filesystem::path HistogramPath() const { return output_dir / "histograms.json"; }
  std::filesystem::path SymbolizedPath() const { return output_dir / "symbolized.jsonl"; }
  std::filesystem::path CheckpointPath() const { return output_dir / "checkpoint.bin"; }
  std::filesystem::path TrainLogPath() const { return output_dir / "train_log.jsonl"; }
  std::filesystem::path ManifestPath() const { return output_dir / "manifest.json"; }
  std::filesystem::path MetricsPath() const { return output_dir / "metrics.json"; }
  std::filesystem::path ScoresPath() const { return output_dir / "scores.jsonl"; }
};

// Seeds of the individual random streams.
std::uint64_t SplitSeed(std::uint64_t seed);
std::uint64_t InitSeed(std::uint64_t seed);
std::uint64_t ShuffleSeed(std::uint64_t seed);

struct PartitionFile {
  std::vector<VariableSpec> variables;
  EntitySplit split;
  nlohmann::json schema;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string digest;  // SHA-256 of the file bytes
};

PartitionFile ReadPartition(const std::filesystem::path& path);

// Learns the partition on training entities and writes partition.json and
// histograms.json.
PartitionFile CmdPartition(const PipelineConfig& cfg);

// Symbolizes every entity of `csv` (the configured CSV when empty) with the
// partition and writes the symbolized dataset.
void CmdSymbolize(const PipelineConfig& cfg, const std::filesystem::path& partition_path,
                  const std::filesystem::path& csv, const std::filesystem::path& out);

struct TrainOutcome {
  TrainResult result;
  WeightSums raw_weights;
  WeightSums renormalized_weights;
  std::size_t train_samples = 0;
  std::size_t validation_samples = 0;
};

// Labels, windows and renormalizes the training entities, fits the network
// and writes checkpoint.bin, train_log.jsonl and manifest.json.
TrainOutcome CmdTrain(const PipelineConfig& cfg, const std::filesystem::path& partition_path,
                      const std::filesystem::path& symbolized_path,
                      const std::function<void(const EpochRecord&)>& on_epoch = {});

struct Evaluation {
  double auc = 0.0;
  OperatingPoint operating_point;
  std::string threshold_source;  // "validation" or "test_in_sample"
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  nlohmann::json report;
};

// Scores the test entities and writes metrics.json to `out`.
Evaluation CmdEvaluate(const std::filesystem::path& checkpoint,
                       const std::filesystem::path& partition_path,
                       const std::filesystem::path& symbolized_path, double max_fpr,
                       const std::filesystem::path& out);

struct Score {
  std::string entity_id;
  std::int64_t t = 0;
  double score = 0.0;
};

enum class PredictInput { kSymbolized, kCsv };

// Scores every window of the input, truncated horizons included, and writes
// a JSON-lines file to `out`.
std::vector<Score> CmdPredict(const std::filesystem::path& checkpoint,
                              const std::filesystem::path& input, PredictInput kind,
                              const std::filesystem::path& out);

}  // namespace symev

#endif  // SYMEV_PIPELINE_HPP_
