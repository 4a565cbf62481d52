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

// JSON forms of the configuration and schema types.

#ifndef SYMEV_SERIALIZE_HPP_
#define SYMEV_SERIALIZE_HPP_

#include <json.hpp>

#include "symev/embeddings.hpp"
#include "symev/labeling.hpp"
#include "symev/layers.hpp"
#include "symev/network.hpp"
#include "symev/partitioning.hpp"

namespace symev {

void to_json(nlohmann::json& j, const VariableSpec& spec);
void from_json(const nlohmann::json& j, VariableSpec& spec);

void to_json(nlohmann::json& j, const LayerSpec& spec);
void from_json(const nlohmann::json& j, LayerSpec& spec);

void to_json(nlohmann::json& j, const VocabThreshold& t);
void from_json(const nlohmann::json& j, VocabThreshold& t);

void to_json(nlohmann::json& j, const EmbeddingConfig& cfg);
void from_json(const nlohmann::json& j, EmbeddingConfig& cfg);

void to_json(nlohmann::json& j, const AdamConfig& cfg);
void from_json(const nlohmann::json& j, AdamConfig& cfg);

void to_json(nlohmann::json& j, const NetworkConfig& cfg);
void from_json(const nlohmann::json& j, NetworkConfig& cfg);

void to_json(nlohmann::json& j, const LabelingConfig& cfg);
void from_json(const nlohmann::json& j, LabelingConfig& cfg);

void to_json(nlohmann::json& j, const Vocabulary& vocab);
Vocabulary VocabularyFromJson(const nlohmann::json& j);

std::string_view PrecisionName(Precision p);
Precision ParsePrecision(std::string_view name);

// Wraps nlohmann exceptions raised while reading `what` into kConfig errors.
template <typename Fn>
auto WithConfigErrors(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kConfig, what + ": " + e.what());
  }
}

}  // namespace symev

#endif  // SYMEV_SERIALIZE_HPP_
