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

#include "symev/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "symev/errors.hpp"
#include "symev/parallel.hpp"
#include "symev/serialize.hpp"

namespace symev {

using nlohmann::json;

namespace {

std::string_view MethodName(SplitMethod m) {
  switch (m) {
    case SplitMethod::kUniform: return "uniform";
    case SplitMethod::kMaxEntropy: return "max_entropy";
    case SplitMethod::kJenks: return "jenks";
  }
  return "max_entropy";
}

SplitMethod ParseMethod(const std::string& name) {
  if (name == "uniform") return SplitMethod::kUniform;
  if (name == "max_entropy") return SplitMethod::kMaxEntropy;
  if (name == "jenks") return SplitMethod::kJenks;
  Fail(ErrorCode::kConfig, "unknown split method '" + name + "'");
}

bool IsMissingToken(std::string_view s) {
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null" ||
         s == "NULL" || s == "?";
}

std::vector<std::string> SplitCsvLine(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string Trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::int64_t ParseInt(const std::string& s, const char* what, std::size_t line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": invalid " + what +
                               " '" + s + "'");
  }
  return v;
}

double ParseDouble(const std::string& s, const std::string& column, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": column '" + column +
                               "' is not a finite number: '" + s + "'");
  }
  return v;
}

int ParseEvent(const std::string& s, std::size_t line_no) {
  if (s == "1" || s == "true" || s == "True") return 1;
  if (s == "0" || s == "false" || s == "False") return 0;
  Fail(ErrorCode::kData,
       "line " + std::to_string(line_no) + ": event label must be 0 or 1, got '" + s + "'");
}

std::size_t VariableIndex(const Schema& schema, const std::string& name) {
  for (std::size_t v = 0; v < schema.variables.size(); ++v) {
    if (schema.variables[v].name == name) return v;
  }
  Fail(ErrorCode::kConfig, "unknown variable '" + name + "'");
}

}  // namespace

Schema Schema::FromJson(const json& j) {
  return WithConfigErrors("schema", [&] {
    Schema s;
    s.entity_column = j.value("entity_column", s.entity_column);
    s.clip_column = j.value("clip_column", s.clip_column);
    s.step_column = j.value("step_column", s.step_column);
    s.event_column = j.value("event_column", s.event_column);
    s.histogram_bins = j.value("histogram_bins", s.histogram_bins);
    if (j.contains("downsample")) {
      const auto& d = j.at("downsample");
      const auto method = d.at("method").get<std::string>();
      if (method == "stride") {
        s.downsample = Downsample::kStride;
      } else if (method == "mean") {
        s.downsample = Downsample::kMean;
      } else if (method != "none") {
        Fail(ErrorCode::kConfig, "unknown downsample method '" + method + "'");
      }
      s.downsample_length = d.at("length").get<std::size_t>();
      if (s.downsample != Downsample::kNone && s.downsample_length == 0) {
        Fail(ErrorCode::kConfig, "downsample length must be positive");
      }
    }
    std::set<std::string> names;
    for (const auto& item : j.at("variables")) {
      VariableConfig v;
      v.name = item.at("name").get<std::string>();
      if (!names.insert(v.name).second) {
        Fail(ErrorCode::kConfig, "duplicate variable '" + v.name + "'");
      }
      const auto kind = item.value("kind", std::string("continuous"));
      if (kind == "continuous") {
        v.kind = VariableKind::kContinuous;
      } else if (kind == "categorical") {
        v.kind = VariableKind::kCategorical;
      } else {
        Fail(ErrorCode::kConfig, "variable '" + v.name + "': unknown kind '" + kind + "'");
      }
      v.method = ParseMethod(item.value("method", std::string("max_entropy")));
      v.fixed_splits = item.value("splits", std::vector<double>{});
      v.fixed_categories = item.value("categories", std::vector<std::string>{});
      v.ordered = item.value("ordered", v.kind == VariableKind::kContinuous);
      v.unknown_slot = item.value("unknown_slot", false);
      v.alphabet_size = item.value("alphabet_size", std::size_t{0});
      if (item.contains("derived_from")) {
        v.derived_from = item.at("derived_from").get<std::string>();
        const auto op = item.value("op", std::string("abs_diff"));
        if (op != "abs_diff") {
          Fail(ErrorCode::kConfig, "variable '" + v.name + "': unknown op '" + op + "'");
        }
        if (v.kind != VariableKind::kContinuous) {
          Fail(ErrorCode::kConfig, "derived variable '" + v.name + "' must be continuous");
        }
      }
      if (v.kind == VariableKind::kContinuous) {
        if (!v.fixed_splits.empty()) {
          if (v.alphabet_size != 0 && v.alphabet_size != v.fixed_splits.size() + 1) {
            Fail(ErrorCode::kInvalidAlphabet,
                 "variable '" + v.name + "': alphabet size disagrees with fixed splits");
          }
          v.alphabet_size = v.fixed_splits.size() + 1;
        }
        if (v.alphabet_size < 2) {
          Fail(ErrorCode::kInvalidAlphabet,
               "variable '" + v.name + "': alphabet size must be at least 2");
        }
      }
      s.variables.push_back(std::move(v));
    }
    if (s.variables.empty()) Fail(ErrorCode::kConfig, "schema declares no variables");
    for (const auto& v : s.variables) {
      if (v.derived_from.empty()) continue;
      const auto& src = s.variables[VariableIndex(s, v.derived_from)];
      if (src.kind != VariableKind::kContinuous || !src.derived_from.empty()) {
        Fail(ErrorCode::kConfig, "variable '" + v.name +
                                     "' must derive from a continuous source variable");
      }
    }
    return s;
  });
}

json Schema::ToJson() const {
  json vars = json::array();
  for (const auto& v : variables) {
    json item{{"name", v.name},
              {"kind", v.kind == VariableKind::kContinuous ? "continuous" : "categorical"},
              {"alphabet_size", v.alphabet_size},
              {"method", MethodName(v.method)},
              {"ordered", v.ordered},
              {"unknown_slot", v.unknown_slot}};
    if (!v.fixed_splits.empty()) item["splits"] = v.fixed_splits;
    if (!v.fixed_categories.empty()) item["categories"] = v.fixed_categories;
    if (!v.derived_from.empty()) {
      item["derived_from"] = v.derived_from;
      item["op"] = "abs_diff";
    }
    vars.push_back(std::move(item));
  }
  json out{{"entity_column", entity_column}, {"clip_column", clip_column},
           {"step_column", step_column},     {"event_column", event_column},
           {"histogram_bins", histogram_bins}, {"variables", vars}};
  if (downsample != Downsample::kNone) {
    out["downsample"] = json{{"method", downsample == Downsample::kStride ? "stride" : "mean"},
                             {"length", downsample_length}};
  }
  return out;
}

RawDataset ReadCsv(std::istream& in, const Schema& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!Trim(line).empty()) {
      header = SplitCsvLine(line, line_no);
      break;
    }
  }
  if (header.empty()) Fail(ErrorCode::kEmptyDataset, "CSV input has no header");
  for (auto& h : header) h = Trim(h);

  const auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      if (required) Fail(ErrorCode::kData, "CSV header lacks column '" + name + "'");
      return -1;
    }
    return it - header.begin();
  };
  const auto entity_col = column(schema.entity_column, true);
  const auto clip_col = column(schema.clip_column, true);
  const auto step_col = schema.step_column.empty() ? -1 : column(schema.step_column, true);
  const auto event_col = column(schema.event_column, true);
  std::vector<std::ptrdiff_t> var_cols;
  for (const auto& v : schema.variables) {
    var_cols.push_back(v.derived_from.empty() ? column(v.name, true) : -1);
  }

  struct StepRow {
    std::int64_t step;
    std::size_t order;
    std::size_t line_no;
    std::vector<std::optional<std::string>> cells;
  };
  struct ClipRows {
    int event = -1;
    std::vector<StepRow> steps;
  };
  std::map<std::string, std::map<std::int64_t, ClipRows>> grouped;
  std::size_t order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    auto fields = SplitCsvLine(line, line_no);
    if (fields.size() != header.size()) {
      Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    for (auto& f : fields) f = Trim(std::move(f));
    const auto& entity = fields[static_cast<std::size_t>(entity_col)];
    if (entity.empty()) {
      Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": empty entity id");
    }
    const auto clip = ParseInt(fields[static_cast<std::size_t>(clip_col)], "clip index", line_no);
    const auto step = step_col < 0 ? static_cast<std::int64_t>(order)
                                   : ParseInt(fields[static_cast<std::size_t>(step_col)],
                                              "step index", line_no);
    const int event = ParseEvent(fields[static_cast<std::size_t>(event_col)], line_no);
    auto& rows = grouped[entity][clip];
    if (rows.event >= 0 && rows.event != event) {
      Fail(ErrorCode::kData, "line " + std::to_string(line_no) + ": entity '" + entity +
                                 "' clip " + std::to_string(clip) +
                                 " has inconsistent event labels");
    }
    rows.event = event;
    StepRow row{step, order++, line_no, {}};
    row.cells.resize(schema.variables.size());
    for (std::size_t v = 0; v < schema.variables.size(); ++v) {
      if (var_cols[v] < 0) continue;
      auto& text = fields[static_cast<std::size_t>(var_cols[v])];
      if (IsMissingToken(text)) continue;
      if (schema.variables[v].kind == VariableKind::kContinuous) {
        ParseDouble(text, schema.variables[v].name, line_no);
      }
      row.cells[v] = std::move(text);
    }
    rows.steps.push_back(std::move(row));
  }

  RawDataset out;
  for (auto& [entity, clips] : grouped) {
    RawEntity e;
    e.id = entity;
    for (auto& [clip, rows] : clips) {
      std::stable_sort(rows.steps.begin(), rows.steps.end(),
                       [](const StepRow& a, const StepRow& b) { return a.step < b.step; });
      for (std::size_t i = 1; i < rows.steps.size(); ++i) {
        if (rows.steps[i].step == rows.steps[i - 1].step) {
          Fail(ErrorCode::kData, "line " + std::to_string(rows.steps[i].line_no) +
                                     ": duplicate step " + std::to_string(rows.steps[i].step) +
                                     " in entity '" + entity + "' clip " +
                                     std::to_string(clip));
        }
      }
      RawClip c;
      c.clip_index = clip;
      c.event_label = rows.event;
      for (auto& r : rows.steps) c.cells.push_back(std::move(r.cells));
      e.clips.push_back(std::move(c));
    }
    out.entities.push_back(std::move(e));
  }
  if (out.entities.empty()) Fail(ErrorCode::kEmptyDataset, "CSV input has no rows");
  return out;
}

RawDataset ReadCsv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return ReadCsv(in, schema);
}

std::vector<std::pair<std::size_t, std::size_t>> DownsampleWindows(std::size_t n,
                                                                   std::size_t length) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n <= length) {
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(i, i + 1);
    return out;
  }
  for (std::size_t i = 0; i < length; ++i) {
    out.emplace_back(i * n / length, (i + 1) * n / length);
  }
  return out;
}

PreparedEntity PrepareEntity(const RawEntity& entity, const Schema& schema) {
  PreparedEntity p;
  p.id = entity.id;
  const std::size_t arity = schema.arity();
  p.clip_begin.push_back(0);
  for (const auto& clip : entity.clips) {
    if (clip.cells.empty()) {
      Fail(ErrorCode::kEmptySequence, "entity '" + entity.id + "' clip " +
                                          std::to_string(clip.clip_index) + " has no steps");
    }
    p.clip_index.push_back(clip.clip_index);
    p.events.push_back(clip.event_label);
    for (const auto& step : clip.cells) p.raw.push_back(step);
    p.clip_begin.push_back(p.raw.size());
  }
  const std::size_t steps = p.raw.size();
  p.numeric.assign(arity, {});
  p.categorical.assign(arity, {});
  try {
    for (std::size_t v = 0; v < arity; ++v) {
      const auto& var = schema.variables[v];
      if (!var.derived_from.empty()) continue;
      if (var.kind == VariableKind::kContinuous) {
        std::vector<std::optional<double>> col(steps);
        for (std::size_t s = 0; s < steps; ++s) {
          if (!p.raw[s][v]) continue;
          const auto& text = *p.raw[s][v];
          double x = 0.0;
          const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
          if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
            Fail(ErrorCode::kData, "variable '" + var.name + "' is not a finite number: '" +
                                       text + "'");
          }
          col[s] = x;
        }
        p.numeric[v] = InterpolateMissing(std::span<const std::optional<double>>(col));
      } else {
        std::vector<std::optional<std::string>> col(steps);
        for (std::size_t s = 0; s < steps; ++s) col[s] = p.raw[s][v];
        p.categorical[v] = InterpolateMissing(std::span<const std::optional<std::string>>(col));
      }
    }
  } catch (const Error& e) {
    Fail(e.code(), "entity '" + entity.id + "': " + e.detail());
  }
  if (schema.downsample != Downsample::kNone) {
    PreparedEntity d;
    d.id = p.id;
    d.clip_index = p.clip_index;
    d.events = p.events;
    d.clip_begin.push_back(0);
    d.numeric.assign(arity, {});
    d.categorical.assign(arity, {});
    for (std::size_t c = 0; c + 1 < p.clip_begin.size(); ++c) {
      const std::size_t base = p.clip_begin[c];
      const auto windows =
          DownsampleWindows(p.clip_begin[c + 1] - base, schema.downsample_length);
      for (const auto& [b, e] : windows) {
        d.raw.push_back(p.raw[base + b]);
        for (std::size_t v = 0; v < arity; ++v) {
          if (!schema.variables[v].derived_from.empty()) continue;
          if (schema.variables[v].kind == VariableKind::kCategorical) {
            d.categorical[v].push_back(p.categorical[v][base + b]);
          } else if (schema.downsample == Downsample::kStride) {
            d.numeric[v].push_back(p.numeric[v][base + b]);
          } else {
            double sum = 0.0;
            for (std::size_t i = b; i < e; ++i) sum += p.numeric[v][base + i];
            d.numeric[v].push_back(sum / static_cast<double>(e - b));
          }
        }
      }
      d.clip_begin.push_back(d.raw.size());
    }
    p = std::move(d);
  }
  const std::size_t out_steps = p.raw.size();
  for (std::size_t v = 0; v < arity; ++v) {
    const auto& var = schema.variables[v];
    if (var.derived_from.empty()) continue;
    const auto& src = p.numeric[VariableIndex(schema, var.derived_from)];
    auto& out = p.numeric[v];
    out.assign(out_steps, 0.0);
    for (std::size_t s = 1; s < out_steps; ++s) out[s] = std::abs(src[s] - src[s - 1]);
  }
  return p;
}

std::vector<PreparedEntity> PrepareAll(const RawDataset& data, const Schema& schema,
                                       Exec exec) {
  std::vector<PreparedEntity> out(data.entities.size());
  ParallelFor(out.size(), exec == Exec::kParallel,
              [&](std::size_t i) { out[i] = PrepareEntity(data.entities[i], schema); });
  return out;
}

std::vector<VariableSpec> LearnPartition(std::span<const PreparedEntity> entities,
                                         const Schema& schema) {
  if (entities.empty()) Fail(ErrorCode::kEmptyDataset, "no entities to learn a partition from");
  std::vector<VariableSpec> specs;
  for (std::size_t v = 0; v < schema.arity(); ++v) {
    const auto& var = schema.variables[v];
    try {
      if (var.kind == VariableKind::kContinuous) {
        if (!var.fixed_splits.empty()) {
          specs.push_back(VariableSpec::Continuous(var.name, var.fixed_splits));
        } else {
          std::vector<double> values;
          for (const auto& e : entities) {
            values.insert(values.end(), e.numeric[v].begin(), e.numeric[v].end());
          }
          specs.push_back(VariableSpec::Continuous(
              var.name, LearnSplits(var.method, values, var.alphabet_size)));
        }
      } else {
        std::vector<std::string> cats = var.fixed_categories;
        if (cats.empty()) {
          std::set<std::string> seen;
          for (const auto& e : entities) seen.insert(e.categorical[v].begin(), e.categorical[v].end());
          cats.assign(seen.begin(), seen.end());
        }
        auto spec = VariableSpec::Categorical(var.name, std::move(cats), var.ordered,
                                              var.unknown_slot);
        if (var.alphabet_size != 0 && var.alphabet_size != spec.alphabet_size) {
          Fail(ErrorCode::kInvalidAlphabet,
               "alphabet size " + std::to_string(var.alphabet_size) + " but " +
                   std::to_string(spec.alphabet_size) + " categories");
        }
        specs.push_back(std::move(spec));
      }
    } catch (const Error& e) {
      Fail(e.code(), "variable '" + var.name + "': " + e.detail());
    }
  }
  return specs;
}

ClipSequence SymbolizeEntity(const PreparedEntity& entity,
                             std::span<const VariableSpec> specs, SymbolizeMode mode) {
  const std::size_t arity = specs.size();
  if (entity.numeric.size() != arity) {
    Fail(ErrorCode::kShapeMismatch, "entity '" + entity.id + "' has " +
                                        std::to_string(entity.numeric.size()) +
                                        " channels, partition has " + std::to_string(arity));
  }
  ClipSequence seq;
  seq.entity_id = entity.id;
  for (std::size_t c = 0; c < entity.clip_index.size(); ++c) {
    SymbolizedClip clip;
    clip.entity_id = entity.id;
    clip.clip_index = entity.clip_index[c];
    clip.event_label = entity.events[c];
    clip.symbols.arity = arity;
    for (std::size_t s = entity.clip_begin[c]; s < entity.clip_begin[c + 1]; ++s) {
      for (std::size_t v = 0; v < arity; ++v) {
        const auto& spec = specs[v];
        try {
          clip.symbols.symbols.push_back(
              spec.kind == VariableKind::kContinuous
                  ? SymbolizeValue(entity.numeric[v][s], spec)
                  : SymbolizeValue(entity.categorical[v][s], spec, mode));
        } catch (const Error& e) {
          Fail(e.code(), "entity '" + entity.id + "' clip " + std::to_string(clip.clip_index) +
                             ": " + e.detail());
        }
        clip.raw.push_back(entity.raw[s][v]);
      }
    }
    seq.clips.push_back(std::move(clip));
  }
  return seq;
}

namespace {

std::vector<ClipSequence> SymbolizeImpl(std::span<const PreparedEntity> entities,
                                        std::span<const VariableSpec> specs,
                                        SymbolizeMode mode, bool parallel) {
  std::vector<ClipSequence> out(entities.size());
  ParallelFor(out.size(), parallel,
              [&](std::size_t i) { out[i] = SymbolizeEntity(entities[i], specs, mode); });
  return out;
}

}  // namespace

namespace serial {
std::vector<ClipSequence> SymbolizeEntities(std::span<const PreparedEntity> entities,
                                            std::span<const VariableSpec> specs,
                                            SymbolizeMode mode) {
  return SymbolizeImpl(entities, specs, mode, false);
}
}  // namespace serial

namespace omp {
std::vector<ClipSequence> SymbolizeEntities(std::span<const PreparedEntity> entities,
                                            std::span<const VariableSpec> specs,
                                            SymbolizeMode mode) {
  return SymbolizeImpl(entities, specs, mode, true);
}
}  // namespace omp

EntitySplit SplitEntities(std::vector<std::string> ids, double val_fraction,
                          double test_fraction, std::uint64_t seed) {
  if (val_fraction < 0.0 || test_fraction < 0.0 || val_fraction + test_fraction >= 1.0) {
    Fail(ErrorCode::kConfig, "split fractions must be non-negative and sum below 1");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    Fail(ErrorCode::kData, "duplicate entity id in split");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n = ids.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(n)));
  if (n_test + n_val >= n) {
    Fail(ErrorCode::kEmptyDataset, "split leaves no training entities");
  }
  EntitySplit split;
  split.test.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_test));
  split.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_test),
                          ids.begin() + static_cast<std::ptrdiff_t>(n_test + n_val));
  split.train.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_test + n_val), ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<ClipSequence> SelectEntities(std::span<const ClipSequence> sequences,
                                         std::span<const std::string> ids) {
  const std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<ClipSequence> out;
  for (const auto& s : sequences) {
    if (wanted.count(s.entity_id)) out.push_back(s);
  }
  return out;
}

std::string WriteSymbolized(const json& header, std::span<const ClipSequence> sequences) {
  std::string out = header.dump() + "\n";
  for (const auto& seq : sequences) {
    for (const auto& clip : seq.clips) {
      json symbols = json::array();
      json raw = json::array();
      const auto arity = clip.symbols.arity;
      for (std::size_t s = 0; s < clip.symbols.steps(); ++s) {
        const auto step = clip.symbols.step(s);
        symbols.push_back(std::vector<Symbol>(step.begin(), step.end()));
        json cells = json::array();
        for (std::size_t v = 0; v < arity; ++v) {
          const auto& cell = clip.raw[s * arity + v];
          cells.push_back(cell ? json(*cell) : json(nullptr));
        }
        raw.push_back(std::move(cells));
      }
      const json record{{"entity_id", clip.entity_id}, {"clip_index", clip.clip_index},
                        {"event_label", clip.event_label}, {"symbols", symbols},
                        {"raw", raw}};
      out += record.dump();
      out += "\n";
    }
  }
  return out;
}

SymbolizedFile ReadSymbolized(std::string_view text) {
  SymbolizedFile file;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::map<std::string, std::size_t> where;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      Fail(ErrorCode::kData, "symbolized line " + std::to_string(line_no) + ": " + e.what());
    }
    if (line_no == 1) {
      if (j.value("format", std::string()) != "symev-symbolized") {
        Fail(ErrorCode::kData, "not a symbolized dataset file");
      }
      file.header = std::move(j);
      continue;
    }
    try {
      SymbolizedClip clip;
      clip.entity_id = j.at("entity_id").get<std::string>();
      clip.clip_index = j.at("clip_index").get<std::int64_t>();
      clip.event_label = j.at("event_label").get<int>();
      const auto& symbols = j.at("symbols");
      const auto& raw = j.at("raw");
      if (symbols.empty()) Fail(ErrorCode::kEmptySequence, "clip without steps");
      clip.symbols.arity = symbols.at(0).size();
      for (std::size_t s = 0; s < symbols.size(); ++s) {
        const auto step = symbols[s].get<std::vector<Symbol>>();
        if (step.size() != clip.symbols.arity || raw.at(s).size() != clip.symbols.arity) {
          Fail(ErrorCode::kShapeMismatch, "ragged symbol rows");
        }
        clip.symbols.symbols.insert(clip.symbols.symbols.end(), step.begin(), step.end());
        for (const auto& cell : raw[s]) {
          clip.raw.push_back(cell.is_null() ? std::nullopt
                                            : std::optional<std::string>(cell.get<std::string>()));
        }
      }
      auto [it, inserted] = where.try_emplace(clip.entity_id, file.sequences.size());
      if (inserted) file.sequences.push_back(ClipSequence{clip.entity_id, {}});
      file.sequences[it->second].clips.push_back(std::move(clip));
    } catch (const json::exception& e) {
      Fail(ErrorCode::kData, "symbolized line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      Fail(e.code(), "symbolized line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
  if (file.header.is_null()) Fail(ErrorCode::kEmptyDataset, "empty symbolized dataset");
  return file;
}

}  // namespace symev
