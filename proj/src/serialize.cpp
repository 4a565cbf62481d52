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

#include "symev/serialize.hpp"

#include "symev/errors.hpp"

namespace symev {

using nlohmann::json;

void to_json(json& j, const VariableSpec& spec) {
  j = json{{"name", spec.name},
           {"kind", spec.kind == VariableKind::kContinuous ? "continuous" : "categorical"},
           {"alphabet_size", spec.alphabet_size},
           {"splits", spec.splits},
           {"categories", spec.categories},
           {"ordered", spec.ordered},
           {"unknown_slot", spec.unknown_slot}};
}

void from_json(const json& j, VariableSpec& spec) {
  spec.name = j.at("name").get<std::string>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "continuous") {
    spec.kind = VariableKind::kContinuous;
  } else if (kind == "categorical") {
    spec.kind = VariableKind::kCategorical;
  } else {
    Fail(ErrorCode::kConfig, "variable '" + spec.name + "': unknown kind '" + kind + "'");
  }
  spec.splits = j.value("splits", std::vector<double>{});
  spec.categories = j.value("categories", std::vector<std::string>{});
  spec.alphabet_size = j.value("alphabet_size", spec.kind == VariableKind::kContinuous
                                                    ? spec.splits.size() + 1
                                                    : spec.categories.size());
  spec.ordered = j.value("ordered", spec.kind == VariableKind::kContinuous);
  spec.unknown_slot = j.value("unknown_slot", false);
  spec.Validate();
}

void to_json(json& j, const LayerSpec& spec) {
  j = json{{"kind", LayerKindName(spec.kind)},
           {"units", spec.units},
           {"kernel", spec.kernel},
           {"size", spec.size},
           {"stride", spec.stride},
           {"activation", ActivationName(spec.activation)},
           {"return_sequences", spec.return_sequences}};
}

void from_json(const json& j, LayerSpec& spec) {
  spec.kind = ParseLayerKind(j.at("kind").get<std::string>());
  spec.units = j.value("units", std::size_t{0});
  spec.kernel = j.value("kernel", std::size_t{0});
  spec.size = j.value("size", std::size_t{0});
  spec.stride = j.value("stride", std::size_t{1});
  spec.activation = ParseActivation(j.value("activation", std::string("linear")));
  spec.return_sequences = j.value("return_sequences", false);
}

void to_json(json& j, const VocabThreshold& t) {
  j = json{{"kind", t.kind == VocabThreshold::Kind::kMinCount ? "min_count"
                                                             : "min_relative_frequency"},
           {"value", t.value}};
}

void from_json(const json& j, VocabThreshold& t) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "min_count") {
    t.kind = VocabThreshold::Kind::kMinCount;
  } else if (kind == "min_relative_frequency") {
    t.kind = VocabThreshold::Kind::kMinRelativeFrequency;
  } else {
    Fail(ErrorCode::kConfig, "unknown vocabulary threshold kind '" + kind + "'");
  }
  t.value = j.at("value").get<double>();
}

void to_json(json& j, const EmbeddingConfig& cfg) {
  j = json{{"variant", VariantName(cfg.variant)},
           {"dim", cfg.dim},
           {"init_scale", cfg.init_scale},
           {"ice_scale", cfg.ice_scale},
           {"vocabulary", cfg.vocab}};
}

void from_json(const json& j, EmbeddingConfig& cfg) {
  cfg = EmbeddingConfig{};
  cfg.variant = ParseVariant(j.at("variant").get<std::string>());
  cfg.dim = j.value("dim", cfg.dim);
  cfg.init_scale = j.value("init_scale", cfg.init_scale);
  cfg.ice_scale = j.value("ice_scale", cfg.ice_scale);
  if (j.contains("vocabulary")) cfg.vocab = j.at("vocabulary").get<VocabThreshold>();
}

void to_json(json& j, const AdamConfig& cfg) {
  j = json{{"learning_rate", cfg.learning_rate},
           {"beta1", cfg.beta1},
           {"beta2", cfg.beta2},
           {"epsilon", cfg.epsilon}};
}

void from_json(const json& j, AdamConfig& cfg) {
  cfg = AdamConfig{};
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.beta1 = j.value("beta1", cfg.beta1);
  cfg.beta2 = j.value("beta2", cfg.beta2);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
}

std::string_view PrecisionName(Precision p) {
  return p == Precision::kFloat32 ? "float32" : "float64";
}

Precision ParsePrecision(std::string_view name) {
  if (name == "float32") return Precision::kFloat32;
  if (name == "float64") return Precision::kFloat64;
  Fail(ErrorCode::kConfig, "unknown precision '" + std::string(name) + "'");
}

void to_json(json& j, const NetworkConfig& cfg) {
  j = json{{"embedding", cfg.embedding},
           {"layers", cfg.layers},
           {"chop_count", cfg.chop_count},
           {"optimizer", cfg.optimizer},
           {"precision", PrecisionName(cfg.precision)},
           {"seed", cfg.seed}};
}

void from_json(const json& j, NetworkConfig& cfg) {
  cfg = NetworkConfig{};
  cfg.embedding = j.at("embedding").get<EmbeddingConfig>();
  cfg.layers = j.at("layers").get<std::vector<LayerSpec>>();
  cfg.chop_count = j.value("chop_count", std::size_t{1});
  if (j.contains("optimizer")) cfg.optimizer = j.at("optimizer").get<AdamConfig>();
  cfg.precision = ParsePrecision(j.value("precision", std::string("float32")));
  cfg.seed = j.value("seed", std::uint64_t{0});
}

void to_json(json& j, const LabelingConfig& cfg) {
  j = json{{"horizon", cfg.horizon},
           {"history", cfg.history},
           {"temporal_weights", cfg.use_temporal_weights},
           {"truncated_as_negative", cfg.truncated_as_negative}};
}

void from_json(const json& j, LabelingConfig& cfg) {
  cfg = LabelingConfig{};
  cfg.horizon = j.at("horizon").get<std::size_t>();
  cfg.history = j.at("history").get<std::size_t>();
  cfg.use_temporal_weights = j.value("temporal_weights", true);
  cfg.truncated_as_negative = j.value("truncated_as_negative", false);
  cfg.Validate();
}

void to_json(json& j, const Vocabulary& vocab) {
  json words = json::array();
  for (const auto& [word, index] : vocab.Entries()) words.push_back(json{word, index});
  j = json{{"arity", vocab.arity()},
           {"oov_index", vocab.oov_index()},
           {"threshold", vocab.threshold()},
           {"words", words}};
}

Vocabulary VocabularyFromJson(const json& j) {
  std::vector<std::pair<Vocabulary::Word, std::size_t>> entries;
  for (const auto& item : j.at("words")) {
    entries.emplace_back(item.at(0).get<Vocabulary::Word>(), item.at(1).get<std::size_t>());
  }
  if (j.value("oov_index", std::size_t{0}) != 0) {
    Fail(ErrorCode::kData, "unsupported OOV index");
  }
  return Vocabulary::FromEntries(j.at("arity").get<std::size_t>(), std::move(entries),
                                 j.at("threshold").get<VocabThreshold>());
}

}  // namespace symev
