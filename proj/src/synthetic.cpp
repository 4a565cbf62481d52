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

#include "symev/synthetic.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

namespace symev {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 5> kStatus = {"ok", "idle", "busy", "warn", "fault"};
constexpr std::array<const char*, 4> kMode = {"m1", "m2", "m3", "m4"};

std::string Number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace

Schema SyntheticSchema() {
  return Schema::FromJson(json::parse(R"({
    "variables": [
      {"name": "level", "kind": "continuous", "alphabet_size": 4, "method": "max_entropy"},
      {"name": "trend", "kind": "continuous", "alphabet_size": 4, "method": "max_entropy"},
      {"name": "noise", "kind": "continuous", "alphabet_size": 3, "method": "jenks"},
      {"name": "status", "kind": "categorical", "categories": ["ok", "idle", "busy", "warn", "fault"], "ordered": true},
      {"name": "mode", "kind": "categorical", "ordered": false}
    ]
  })"));
}

std::string SyntheticCsv(const SyntheticConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> steps_dist(cfg.min_steps, cfg.max_steps);

  const auto n_failing = static_cast<std::size_t>(
      std::llround(cfg.failing_fraction * static_cast<double>(cfg.entities)));
  std::vector<bool> failing(cfg.entities, false);
  std::fill(failing.begin(), failing.begin() + static_cast<std::ptrdiff_t>(n_failing), true);
  std::shuffle(failing.begin(), failing.end(), rng);

  std::string out = "entity_id,clip_index,step_index,event_label,level,trend,noise,status,mode\n";
  for (std::size_t e = 0; e < cfg.entities; ++e) {
    char id[32];
    std::snprintf(id, sizeof(id), "unit%03zu", e);
    const std::size_t n = cfg.clips_per_entity;
    const double offset = 0.3 * normal(rng);
    for (std::size_t c = 0; c < n; ++c) {
      const bool event = failing[e] && c + 1 == n;
      const bool motif = failing[e] && c + 1 < n && c + 1 + cfg.motif_clips >= n;
      const std::size_t steps = steps_dist(rng);
      for (std::size_t s = 0; s < steps; ++s) {
        const double frac = static_cast<double>(s) / static_cast<double>(steps);
        double level = offset + normal(rng);
        double trend = 0.5 * normal(rng);
        if (motif) {
          level = 3.0 + 0.3 * normal(rng);
          trend = 1.0 + 2.0 * frac + 0.2 * normal(rng);
        }
        const double noise = unit(rng) < 0.5 ? normal(rng) : 5.0 + normal(rng);
        std::size_t status = static_cast<std::size_t>(unit(rng) * 4.0);
        if (motif || unit(rng) < 0.01) status = 4;
        const std::size_t mode = static_cast<std::size_t>(unit(rng) * 4.0);
        const auto cell = [&](double x) {
          return unit(rng) < cfg.missing_rate ? std::string() : Number(x);
        };
        out += id;
        out += ',' + std::to_string(c) + ',' + std::to_string(s) + ',' + (event ? "1" : "0");
        out += ',' + cell(level) + ',' + cell(trend) + ',' + cell(noise);
        out += ',';
        out += kStatus[status];
        out += ',';
        out += kMode[std::min<std::size_t>(mode, 3)];
        out += '\n';
      }
    }
  }
  return out;
}

json SyntheticPipelineJson(EmbeddingVariant variant, const std::string& csv_path,
                           std::uint64_t seed) {
  json embedding{{"variant", VariantName(variant)},
                 {"dim", variant == EmbeddingVariant::kWdE ? 8 : 4},
                 {"vocabulary", {{"kind", "min_count"}, {"value", 2}}}};
  return json{
      {"data", {{"csv", csv_path}}},
      {"schema", SyntheticSchema().ToJson()},
      {"labeling", {{"horizon", 3}, {"history", 2}, {"temporal_weights", true}}},
      {"embedding", embedding},
      {"network",
       {{"layers", json::array({json{{"kind", "lstm"}, {"units", 8}},
                                json{{"kind", "dense"}, {"units", 1}},
                                json{{"kind", "sigmoid"}}})},
        {"chop_count", 1},
        {"precision", "float32"}}},
      {"optimizer", {{"learning_rate", 0.005}}},
      {"training", {{"epochs", 20}, {"batch_size", 1}, {"patience", 5}, {"parallel", true}}},
      {"split", {{"val_fraction", 0.2}, {"test_fraction", 0.3}}},
      {"evaluation", {{"max_fpr", 0.05}}},
      {"seed", seed}};
}

Schema Figure2Schema() {
  return Schema::FromJson(json::parse(R"({
    "variables": [
      {"name": "Z1", "kind": "continuous", "alphabet_size": 2, "method": "uniform"},
      {"name": "Z2", "kind": "categorical", "alphabet_size": 5, "ordered": false}
    ]
  })"));
}

std::string Figure2Csv() {
  static constexpr std::array<double, 10> kZ1 = {0.0, 3.5, 7.0, 10.5, 14.0,
                                                 12.0, 2.0, 9.0, 5.5, 13.0};
  static constexpr std::array<const char*, 10> kZ2 = {"a", "b", "c", "d", "e",
                                                      "a", "c", "e", "b", "d"};
  std::string out = "entity_id,clip_index,step_index,event_label,Z1,Z2\n";
  for (std::size_t i = 0; i < kZ1.size(); ++i) {
    const std::size_t clip = i / 5;
    out += "demo," + std::to_string(clip) + ',' + std::to_string(i % 5) + ',' +
           (clip == 1 ? "1" : "0") + ',' + Number(kZ1[i]) + ',' + kZ2[i] + '\n';
  }
  return out;
}

}  // namespace symev
