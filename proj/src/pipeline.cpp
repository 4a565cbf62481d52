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

#include "symev/pipeline.hpp"

#include <cmath>
#include <set>
#include <random>
#include <variant>

#include "symev/checkpoint.hpp"
#include "symev/errors.hpp"
#include "symev/io.hpp"
#include "symev/kernels.hpp"
#include "symev/serialize.hpp"

namespace symev {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string Pretty(const json& j) { return j.dump(2) + "\n"; }

void WriteJson(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFileAtomic(path, Pretty(j));
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  WriteFileAtomic(path, text);
}

json ParseJson(const std::string& text, const fs::path& path) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kData, path.string() + ": " + e.what());
  }
}

json NullableDouble(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json Optional(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::vector<int> Labels(std::span<const LabeledSample> samples) {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.target);
  return out;
}

bool BothClasses(std::span<const int> labels) {
  bool pos = false;
  bool neg = false;
  for (int y : labels) (y ? pos : neg) = true;
  return pos && neg;
}

std::optional<Vocabulary> BuildVocabulary(const NetworkConfig& cfg,
                                          std::span<const ClipSequence> train) {
  if (cfg.embedding.variant != EmbeddingVariant::kWdE) return std::nullopt;
  std::vector<SymbolSequence> clips;
  for (const auto& seq : train) {
    for (const auto& clip : seq.clips) clips.push_back(clip.symbols);
  }
  return Vocabulary::Build(clips, cfg.embedding.vocab);
}

template <typename T>
std::vector<double> Scores(const Network<T>& net, std::span<const LabeledSample> samples,
                           Exec exec) {
  const auto raw = PredictBatch(net, samples, exec);
  return std::vector<double>(raw.begin(), raw.end());
}

}  // namespace

std::uint64_t SplitSeed(std::uint64_t seed) { return seed; }
std::uint64_t InitSeed(std::uint64_t seed) { return seed + 1; }
std::uint64_t ShuffleSeed(std::uint64_t seed) { return seed + 2; }

PipelineConfig PipelineConfig::FromJson(const json& j, const fs::path& base_dir) {
  return WithConfigErrors("pipeline config", [&] {
    PipelineConfig cfg;
    if (j.contains("data")) {
      const fs::path csv = j.at("data").at("csv").get<std::string>();
      cfg.csv = csv.is_absolute() ? csv : base_dir / csv;
    }
    cfg.schema = Schema::FromJson(j.at("schema"));
    cfg.labeling = j.at("labeling").get<LabelingConfig>();

    const auto& net = j.at("network");
    cfg.network.embedding = j.at("embedding").get<EmbeddingConfig>();
    if (cfg.network.embedding.variant != EmbeddingVariant::kICE &&
        !j.at("embedding").contains("dim")) {
      Fail(ErrorCode::kConfig, "embedding dimension 'dim' is required for WdE and SCE");
    }
    cfg.network.layers = net.at("layers").get<std::vector<LayerSpec>>();
    cfg.network.chop_count = net.value("chop_count", std::size_t{1});
    cfg.network.precision = ParsePrecision(net.value("precision", std::string("float32")));
    if (j.contains("optimizer")) cfg.network.optimizer = j.at("optimizer").get<AdamConfig>();

    if (j.contains("training")) {
      const auto& t = j.at("training");
      cfg.training.epochs = t.value("epochs", cfg.training.epochs);
      cfg.training.batch_size = t.value("batch_size", cfg.training.batch_size);
      cfg.training.patience = t.value("patience", cfg.training.patience);
      cfg.training.exec = t.value("parallel", true) ? Exec::kParallel : Exec::kSerial;
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      cfg.split.val_fraction = s.value("val_fraction", cfg.split.val_fraction);
      cfg.split.test_fraction = s.value("test_fraction", cfg.split.test_fraction);
    }
    if (j.contains("evaluation")) cfg.max_fpr = j.at("evaluation").value("max_fpr", cfg.max_fpr);
    if (j.contains("output_dir")) {
      const fs::path out = j.at("output_dir").get<std::string>();
      cfg.output_dir = out.is_absolute() ? out : base_dir / out;
    } else {
      cfg.output_dir = base_dir / "out";
    }
    cfg.SetSeed(j.value("seed", std::uint64_t{0}));

    for (const auto& v : cfg.schema.variables) {
      if (v.kind == VariableKind::kContinuous && v.alphabet_size < 2) {
        Fail(ErrorCode::kInvalidAlphabet, "variable '" + v.name + "'");
      }
    }
    if (cfg.training.batch_size == 0) Fail(ErrorCode::kConfig, "batch_size must be positive");
    if (!(cfg.max_fpr >= 0.0 && cfg.max_fpr < 1.0)) {
      Fail(ErrorCode::kConfig, "max_fpr must lie in [0, 1)");
    }
    cfg.network.Validate();
    return cfg;
  });
}

PipelineConfig PipelineConfig::Load(const fs::path& path) {
  const auto text = ReadFile(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  return FromJson(j, path.parent_path());
}

void PipelineConfig::SetSeed(std::uint64_t value) {
  seed = value;
  network.seed = InitSeed(value);
  training.seed = ShuffleSeed(value);
}

json PipelineConfig::ToJson() const {
  return json{{"schema", schema.ToJson()},
              {"labeling", labeling},
              {"embedding", network.embedding},
              {"network",
               {{"layers", network.layers},
                {"chop_count", network.chop_count},
                {"precision", PrecisionName(network.precision)}}},
              {"optimizer", network.optimizer},
              {"training",
               {{"epochs", training.epochs},
                {"batch_size", training.batch_size},
                {"patience", training.patience}}},
              {"split",
               {{"val_fraction", split.val_fraction}, {"test_fraction", split.test_fraction}}},
              {"evaluation", {{"max_fpr", max_fpr}}},
              {"seed", seed}};
}

std::string PipelineConfig::Digest() const { return Sha256Hex(ToJson().dump()); }

PartitionFile ReadPartition(const fs::path& path) {
  const auto text = ReadFile(path);
  const auto j = ParseJson(text, path);
  if (j.value("format", std::string()) != "symev-partition") {
    Fail(ErrorCode::kData, path.string() + ": not a partition file");
  }
  return WithConfigErrors(path.string(), [&] {
    PartitionFile p;
    p.variables = j.at("variables").get<std::vector<VariableSpec>>();
    p.split.train = j.at("split").at("train").get<std::vector<std::string>>();
    p.split.validation = j.at("split").at("validation").get<std::vector<std::string>>();
    p.split.test = j.at("split").at("test").get<std::vector<std::string>>();
    p.schema = j.at("schema");
    p.config_digest = j.at("config_digest").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.digest = Sha256Hex(text);
    return p;
  });
}

PartitionFile CmdPartition(const PipelineConfig& cfg) {
  const auto raw = ReadCsv(cfg.csv, cfg.schema);
  const auto prepared = PrepareAll(raw, cfg.schema, cfg.training.exec);
  std::vector<std::string> ids;
  for (const auto& e : prepared) ids.push_back(e.id);
  PartitionFile p;
  p.split = SplitEntities(ids, cfg.split.val_fraction, cfg.split.test_fraction,
                          SplitSeed(cfg.seed));
  std::vector<PreparedEntity> train;
  {
    const std::set<std::string> wanted(p.split.train.begin(), p.split.train.end());
    for (const auto& e : prepared) {
      if (wanted.count(e.id)) train.push_back(e);
    }
  }
  p.variables = LearnPartition(train, cfg.schema);
  p.schema = cfg.schema.ToJson();
  p.config_digest = cfg.Digest();
  p.seed = cfg.seed;

  json hist = json::array();
  for (std::size_t v = 0; v < cfg.schema.arity(); ++v) {
    const auto& var = cfg.schema.variables[v];
    json item{{"name", var.name}};
    if (var.kind == VariableKind::kContinuous) {
      std::vector<double> values;
      for (const auto& e : train) values.insert(values.end(), e.numeric[v].begin(), e.numeric[v].end());
      const auto h = ContinuousHistogram(values, cfg.schema.histogram_bins);
      item["kind"] = "continuous";
      item["edges"] = h.edges;
      item["counts"] = h.counts;
    } else {
      std::vector<std::string> values;
      for (const auto& e : train) {
        values.insert(values.end(), e.categorical[v].begin(), e.categorical[v].end());
      }
      const auto h = CategoricalHistogram(values);
      item["kind"] = "categorical";
      item["labels"] = h.labels;
      item["counts"] = h.counts;
    }
    hist.push_back(std::move(item));
  }

  const json partition{{"format", "symev-partition"},
                       {"version", 1},
                       {"variables", p.variables},
                       {"split",
                        {{"train", p.split.train},
                         {"validation", p.split.validation},
                         {"test", p.split.test}}},
                       {"schema", p.schema},
                       {"data_digest", Sha256Hex(ReadFile(cfg.csv))},
                       {"config_digest", p.config_digest},
                       {"seed", p.seed}};
  const std::string text = Pretty(partition);
  WriteText(cfg.PartitionPath(), text);
  p.digest = Sha256Hex(text);
  WriteJson(cfg.HistogramPath(), json{{"format", "symev-histograms"},
                                      {"variables", hist},
                                      {"config_digest", p.config_digest},
                                      {"seed", p.seed}});
  return p;
}

void CmdSymbolize(const PipelineConfig& cfg, const fs::path& partition_path,
                  const fs::path& csv, const fs::path& out) {
  const auto partition = ReadPartition(partition_path);
  if (partition.schema != cfg.schema.ToJson()) {
    Fail(ErrorCode::kDigestMismatch, "partition file was learned for a different schema");
  }
  const auto raw = ReadCsv(csv.empty() ? cfg.csv : csv, cfg.schema);
  const auto prepared = PrepareAll(raw, cfg.schema, cfg.training.exec);
  const auto sequences =
      cfg.training.exec == Exec::kParallel
          ? omp::SymbolizeEntities(prepared, partition.variables, SymbolizeMode::kInference)
          : serial::SymbolizeEntities(prepared, partition.variables, SymbolizeMode::kInference);
  json names = json::array();
  for (const auto& v : partition.variables) names.push_back(v.name);
  const json header{{"format", "symev-symbolized"},
                    {"version", 1},
                    {"variables", names},
                    {"partition_digest", partition.digest},
                    {"config_digest", cfg.Digest()},
                    {"seed", cfg.seed}};
  WriteText(out, WriteSymbolized(header, sequences));
}

namespace {

struct LoadedData {
  PartitionFile partition;
  SymbolizedFile symbolized;
  std::string symbolized_digest;
};

LoadedData LoadData(const fs::path& partition_path, const fs::path& symbolized_path) {
  LoadedData d;
  d.partition = ReadPartition(partition_path);
  const auto text = ReadFile(symbolized_path);
  d.symbolized = ReadSymbolized(text);
  d.symbolized_digest = Sha256Hex(text);
  if (d.symbolized.header.value("partition_digest", std::string()) != d.partition.digest) {
    Fail(ErrorCode::kDigestMismatch,
         "symbolized data was not produced with partition '" + partition_path.string() + "'");
  }
  return d;
}

template <typename T>
void TrainImpl(const PipelineConfig& cfg, const LoadedData& data,
               std::span<const ClipSequence> train_seqs,
               std::span<const LabeledSample> train, std::span<const LabeledSample> val,
               const std::function<void(const EpochRecord&)>& on_epoch, TrainOutcome& out) {
  std::mt19937_64 rng(cfg.network.seed);
  auto net = Network<T>::Create(cfg.network, data.partition.variables,
                                BuildVocabulary(cfg.network, train_seqs), rng);
  std::string log;
  const auto digest = cfg.Digest();
  TrainConfig tc = cfg.training;
  tc.max_fpr = cfg.max_fpr;
  out.result = Train<T>(net, train, val, tc, [&](const EpochRecord& r) {
    const json rec{{"epoch", r.epoch},
                   {"train_loss", r.train_loss},
                   {"val_auc", Optional(r.val_auc)},
                   {"val_balacc", Optional(r.val_balanced_accuracy)},
                   {"wall_ms", r.wall_ms},
                   {"config_digest", digest},
                   {"seed", cfg.seed}};
    log += rec.dump() + "\n";
    if (on_epoch) on_epoch(r);
  });

  CheckpointInfo info;
  info.variables = data.partition.variables;
  info.partition_digest = data.partition.digest;
  info.config_digest = digest;
  info.training = TrainingMeta{out.result.history.size(), out.result.best_epoch,
                               out.result.final_loss, cfg.seed, out.result.steps};
  info.pipeline = json{{"schema", cfg.schema.ToJson()},
                       {"labeling", cfg.labeling},
                       {"max_fpr", cfg.max_fpr}};
  const auto bytes = SerializeCheckpoint(net, info);
  WriteText(cfg.CheckpointPath(), bytes);
  WriteText(cfg.TrainLogPath(), log);

  WriteJson(cfg.ManifestPath(),
            json{{"format", "symev-manifest"},
                 {"config_digest", digest},
                 {"partition_digest", data.partition.digest},
                 {"symbolized_digest", data.symbolized_digest},
                 {"checkpoint_digest", Sha256Hex(bytes)},
                 {"seed", cfg.seed},
                 {"parameters", net.ParameterCount()},
                 {"epochs_run", out.result.history.size()},
                 {"best_epoch", out.result.best_epoch},
                 {"final_loss", out.result.final_loss},
                 {"train_samples", out.train_samples},
                 {"validation_samples", out.validation_samples},
                 {"weights",
                  {{"positive_sum", out.renormalized_weights.positive},
                   {"negative_sum", out.renormalized_weights.negative},
                   {"raw_positive_sum", out.raw_weights.positive},
                   {"raw_negative_sum", out.raw_weights.negative},
                   {"n_positive", out.renormalized_weights.n_positive},
                   {"n_negative", out.renormalized_weights.n_negative}}}});
}

}  // namespace

TrainOutcome CmdTrain(const PipelineConfig& cfg, const fs::path& partition_path,
                      const fs::path& symbolized_path,
                      const std::function<void(const EpochRecord&)>& on_epoch) {
  const auto data = LoadData(partition_path, symbolized_path);
  const auto train_seqs = SelectEntities(data.symbolized.sequences, data.partition.split.train);
  const auto val_seqs =
      SelectEntities(data.symbolized.sequences, data.partition.split.validation);
  if (train_seqs.empty()) Fail(ErrorCode::kEmptyDataset, "no training entities in data");

  TrainOutcome out;
  auto train = WindowAll(train_seqs, cfg.labeling);
  if (train.empty()) Fail(ErrorCode::kEmptyDataset, "no training samples after windowing");
  out.raw_weights = SumWeights(train);
  train = RenormalizeWeights(std::move(train));
  out.renormalized_weights = SumWeights(train);
  const auto val = WindowAll(val_seqs, cfg.labeling);
  out.train_samples = train.size();
  out.validation_samples = val.size();

  if (cfg.network.precision == Precision::kFloat32) {
    TrainImpl<float>(cfg, data, train_seqs, train, val, on_epoch, out);
  } else {
    TrainImpl<double>(cfg, data, train_seqs, train, val, on_epoch, out);
  }
  return out;
}

Evaluation CmdEvaluate(const fs::path& checkpoint, const fs::path& partition_path,
                       const fs::path& symbolized_path, double max_fpr, const fs::path& out) {
  if (!(max_fpr >= 0.0 && max_fpr < 1.0)) Fail(ErrorCode::kConfig, "max_fpr must lie in [0, 1)");
  const auto model = LoadCheckpoint(checkpoint);
  const auto data = LoadData(partition_path, symbolized_path);
  return std::visit(
      [&](const auto& m) {
        if (m.info.partition_digest != data.partition.digest) {
          Fail(ErrorCode::kDigestMismatch, "checkpoint was trained with a different partition");
        }
        const auto labeling = m.info.pipeline.at("labeling").template get<LabelingConfig>();
        const auto test_seqs =
            SelectEntities(data.symbolized.sequences, data.partition.split.test);
        const auto val_seqs =
            SelectEntities(data.symbolized.sequences, data.partition.split.validation);
        const auto test = WindowAll(test_seqs, labeling);
        const auto val = WindowAll(val_seqs, labeling);
        const auto test_labels = Labels(test);
        const auto val_labels = Labels(val);
        if (!BothClasses(test_labels)) {
          Fail(ErrorCode::kSingleClassDataset, "test entities need both classes");
        }

        Evaluation ev;
        const auto scores = Scores(m.network, test, Exec::kParallel);
        ev.auc = Auc(scores, test_labels);
        if (BothClasses(val_labels)) {
          const auto val_scores = Scores(m.network, val, Exec::kParallel);
          const auto chosen = BalancedAccuracyAtFpr(val_scores, val_labels, max_fpr);
          ev.operating_point = BalancedAccuracyAt(scores, test_labels, chosen.threshold);
          ev.threshold_source = "validation";
        } else {
          ev.operating_point = BalancedAccuracyAtFpr(scores, test_labels, max_fpr);
          ev.threshold_source = "test_in_sample";
        }
        for (int y : test_labels) (y ? ev.n_pos : ev.n_neg) += 1;

        json roc = json::array();
        for (const auto& p : RocCurve(scores, test_labels)) {
          roc.push_back(json::array({p.fpr, p.tpr, NullableDouble(p.threshold)}));
        }
        ev.report = json{{"format", "symev-metrics"},
                         {"auc", ev.auc},
                         {"balanced_accuracy", ev.operating_point.balanced_accuracy},
                         {"threshold", NullableDouble(ev.operating_point.threshold)},
                         {"threshold_source", ev.threshold_source},
                         {"fpr", ev.operating_point.fpr},
                         {"tpr", ev.operating_point.tpr},
                         {"max_fpr", max_fpr},
                         {"n_pos", ev.n_pos},
                         {"n_neg", ev.n_neg},
                         {"roc", roc},
                         {"config_digest", m.info.config_digest},
                         {"partition_digest", m.info.partition_digest},
                         {"seed", m.info.training.seed}};
        WriteJson(out, ev.report);
        return ev;
      },
      model);
}

std::vector<Score> CmdPredict(const fs::path& checkpoint, const fs::path& input,
                              PredictInput kind, const fs::path& out) {
  const auto model = LoadCheckpoint(checkpoint);
  return std::visit(
      [&](const auto& m) {
        const auto labeling = m.info.pipeline.at("labeling").template get<LabelingConfig>();
        std::vector<ClipSequence> sequences;
        if (kind == PredictInput::kSymbolized) {
          auto file = ReadSymbolized(ReadFile(input));
          if (file.header.value("partition_digest", std::string()) != m.info.partition_digest) {
            Fail(ErrorCode::kDigestMismatch,
                 "data was symbolized with a different partition than the checkpoint");
          }
          sequences = std::move(file.sequences);
        } else {
          const auto schema = Schema::FromJson(m.info.pipeline.at("schema"));
          const auto raw = ReadCsv(input, schema);
          const auto prepared = PrepareAll(raw, schema, Exec::kParallel);
          sequences = omp::SymbolizeEntities(prepared, m.info.variables,
                                             SymbolizeMode::kInference);
        }
        const auto samples = WindowAll(sequences, labeling, /*keep_truncated=*/true);
        const auto scores = Scores(m.network, samples, Exec::kParallel);
        std::vector<Score> result;
        std::string text = json{{"format", "symev-scores"},
                                {"config_digest", m.info.config_digest},
                                {"partition_digest", m.info.partition_digest},
                                {"seed", m.info.training.seed}}
                               .dump() +
                           "\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
          Score s{samples[i].origin.entity_id, samples[i].origin.clip_index, scores[i]};
          text += json{{"entity_id", s.entity_id}, {"t", s.t}, {"score", s.score}}.dump() + "\n";
          result.push_back(std::move(s));
        }
        WriteText(out, text);
        return result;
      },
      model);
}

}  // namespace symev
