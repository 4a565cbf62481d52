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

// Model checkpoint container.
//
// Layout (all integers little endian):
//   8 bytes   magic "SYMEVCKP"
//   4 bytes   format version
//   8 bytes   header length in bytes
//   header    canonical JSON: config, variables, vocabulary, tensor table,
//             digests, training metadata
//   payload   tensors in table order, raw little-endian float32/float64

#ifndef SYMEV_CHECKPOINT_HPP_
#define SYMEV_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "symev/network.hpp"
#include "symev/partitioning.hpp"

namespace symev {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct TrainingMeta {
  std::size_t epochs = 0;
  std::size_t best_epoch = 0;
  double final_loss = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
};

struct CheckpointInfo {
  std::vector<VariableSpec> variables;
  std::string partition_digest;
  std::string config_digest;
  TrainingMeta training;
  // Free-form pipeline section (schema, labeling) carried verbatim.
  nlohmann::json pipeline = nlohmann::json::object();
};

template <typename T>
struct Model {
  Network<T> network;
  CheckpointInfo info;
};

using AnyModel = std::variant<Model<float>, Model<double>>;

template <typename T>
std::string SerializeCheckpoint(const Network<T>& net, const CheckpointInfo& info);

AnyModel ParseCheckpoint(std::string_view bytes);

template <typename T>
void SaveCheckpoint(const std::filesystem::path& path, const Network<T>& net,
                    const CheckpointInfo& info);
AnyModel LoadCheckpoint(const std::filesystem::path& path);

std::string SerializeCheckpoint(const AnyModel& model);

}  // namespace symev

#endif  // SYMEV_CHECKPOINT_HPP_
