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

// symev: partition, symbolize, train, evaluate and predict on heterogeneous
// event time series.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symev/errors.hpp"
#include "symev/io.hpp"
#include "symev/pipeline.hpp"
#include "symev/synthetic.hpp"

namespace fs = std::filesystem;
using symev::PipelineConfig;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void AddCommon(CLI::App* cmd, Common& c, bool config_required = true) {
  auto* opt = cmd->add_option("--config", c.config, "pipeline configuration JSON");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "override the configured seed");
  cmd->add_option("--out", c.out, "output directory");
}

PipelineConfig LoadConfig(const Common& c) {
  auto cfg = PipelineConfig::Load(c.config);
  if (c.seed) cfg.SetSeed(*c.seed);
  if (!c.out.empty()) cfg.output_dir = c.out;
  return cfg;
}

fs::path Or(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

void PrintEpoch(const symev::EpochRecord& r) {
  std::cerr << "epoch " << r.epoch << " loss " << r.train_loss;
  if (r.val_auc) std::cerr << " val_auc " << *r.val_auc;
  if (r.val_balanced_accuracy) std::cerr << " val_balacc " << *r.val_balanced_accuracy;
  std::cerr << " (" << static_cast<long long>(r.wall_ms) << " ms)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic embedding classifiers for event prediction in time series"};
  app.require_subcommand(1);

  Common common;
  std::string partition_path;
  std::string data_path;
  std::string csv_path;
  std::string checkpoint_path;
  std::string input_path;
  std::optional<double> max_fpr;
  std::string variant = "sce";
  std::string demo = "planted";

  auto* partition = app.add_subcommand("partition", "learn variable partitions");
  AddCommon(partition, common);

  auto* symbolize = app.add_subcommand("symbolize", "symbolize a CSV with a partition");
  AddCommon(symbolize, common);
  symbolize->add_option("--partition", partition_path, "partition file");
  symbolize->add_option("--csv", csv_path, "CSV input (default: configured data)");

  auto* train = app.add_subcommand("train", "train a classifier");
  AddCommon(train, common);
  train->add_option("--partition", partition_path, "partition file");
  train->add_option("--data", data_path, "symbolized dataset");

  auto* evaluate = app.add_subcommand("evaluate", "score the test entities");
  AddCommon(evaluate, common);
  evaluate->add_option("--max-fpr", max_fpr, "false positive rate cap")
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_option("--checkpoint", checkpoint_path, "checkpoint file");
  evaluate->add_option("--partition", partition_path, "partition file");
  evaluate->add_option("--data", data_path, "symbolized dataset");

  auto* predict = app.add_subcommand("predict", "score every window of a dataset");
  AddCommon(predict, common, false);
  predict->add_option("--checkpoint", checkpoint_path, "checkpoint file");
  auto* data_opt = predict->add_option("--data", data_path, "symbolized dataset");
  auto* csv_opt = predict->add_option("--csv", csv_path, "raw CSV input");
  data_opt->excludes(csv_opt);

  auto* run = app.add_subcommand("run", "partition, symbolize, train and evaluate");
  AddCommon(run, common);
  run->add_option("--max-fpr", max_fpr, "false positive rate cap")->check(CLI::Range(0.0, 1.0));

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset and config");
  synth->add_option("--out", common.out, "output directory")->required();
  synth->add_option("--seed", common.seed, "generator and pipeline seed");
  synth->add_option("--variant", variant, "embedding variant")
      ->check(CLI::IsMember({"wde", "sce", "ice"}));
  synth->add_option("--demo", demo, "dataset")->check(CLI::IsMember({"planted", "fig2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  try {
    if (partition->parsed()) {
      const auto cfg = LoadConfig(common);
      const auto p = symev::CmdPartition(cfg);
      std::cout << cfg.PartitionPath().string() << " " << p.digest << "\n";
    } else if (symbolize->parsed()) {
      const auto cfg = LoadConfig(common);
      symev::CmdSymbolize(cfg, Or(partition_path, cfg.PartitionPath()), csv_path,
                          cfg.SymbolizedPath());
      std::cout << cfg.SymbolizedPath().string() << "\n";
    } else if (train->parsed()) {
      const auto cfg = LoadConfig(common);
      const auto outcome =
          symev::CmdTrain(cfg, Or(partition_path, cfg.PartitionPath()),
                          Or(data_path, cfg.SymbolizedPath()), PrintEpoch);
      std::cout << cfg.CheckpointPath().string() << " best_epoch "
                << outcome.result.best_epoch << "\n";
    } else if (evaluate->parsed()) {
      const auto cfg = LoadConfig(common);
      const auto ev = symev::CmdEvaluate(
          Or(checkpoint_path, cfg.CheckpointPath()), Or(partition_path, cfg.PartitionPath()),
          Or(data_path, cfg.SymbolizedPath()), max_fpr.value_or(cfg.max_fpr), cfg.MetricsPath());
      std::cout << "auc " << ev.auc << " balanced_accuracy "
                << ev.operating_point.balanced_accuracy << " (" << ev.threshold_source << ")\n";
    } else if (predict->parsed()) {
      fs::path out_dir = common.out;
      fs::path checkpoint = checkpoint_path;
      if (!common.config.empty()) {
        const auto cfg = LoadConfig(common);
        out_dir = cfg.output_dir;
        if (checkpoint.empty()) checkpoint = cfg.CheckpointPath();
      }
      if (checkpoint.empty()) symev::Fail(symev::ErrorCode::kConfig, "--checkpoint is required");
      if (data_path.empty() && csv_path.empty()) {
        symev::Fail(symev::ErrorCode::kConfig, "one of --data or --csv is required");
      }
      if (out_dir.empty()) out_dir = ".";
      const auto out = out_dir / "scores.jsonl";
      const auto scores =
          csv_path.empty()
              ? symev::CmdPredict(checkpoint, data_path, symev::PredictInput::kSymbolized, out)
              : symev::CmdPredict(checkpoint, csv_path, symev::PredictInput::kCsv, out);
      std::cout << out.string() << " " << scores.size() << " scores\n";
    } else if (run->parsed()) {
      const auto cfg = LoadConfig(common);
      symev::CmdPartition(cfg);
      symev::CmdSymbolize(cfg, cfg.PartitionPath(), {}, cfg.SymbolizedPath());
      symev::CmdTrain(cfg, cfg.PartitionPath(), cfg.SymbolizedPath(), PrintEpoch);
      const auto ev = symev::CmdEvaluate(cfg.CheckpointPath(), cfg.PartitionPath(),
                                         cfg.SymbolizedPath(), max_fpr.value_or(cfg.max_fpr),
                                         cfg.MetricsPath());
      std::cout << "auc " << ev.auc << " balanced_accuracy "
                << ev.operating_point.balanced_accuracy << " (" << ev.threshold_source << ")\n";
    } else if (synth->parsed()) {
      const fs::path out = common.out;
      fs::create_directories(out);
      const std::uint64_t seed = common.seed.value_or(1);
      if (demo == "fig2") {
        symev::WriteFileAtomic(out / "data.csv", symev::Figure2Csv());
        const nlohmann::json cfg{
            {"data", {{"csv", "data.csv"}}},
            {"schema", symev::Figure2Schema().ToJson()},
            {"labeling", {{"horizon", 1}, {"history", 0}}},
            {"embedding", {{"variant", variant}, {"dim", 2}}},
            {"network",
             {{"layers", {{{"kind", "lstm"}, {"units", 2}},
                          {{"kind", "dense"}, {"units", 1}},
                          {{"kind", "sigmoid"}}}}}},
            {"split", {{"val_fraction", 0.0}, {"test_fraction", 0.0}}},
            {"seed", seed}};
        symev::WriteFileAtomic(out / "config.json", cfg.dump(2) + "\n");
      } else {
        symev::SyntheticConfig sc;
        sc.seed = seed;
        symev::WriteFileAtomic(out / "data.csv", symev::SyntheticCsv(sc));
        const auto cfg = symev::SyntheticPipelineJson(symev::ParseVariant(variant), "data.csv", seed);
        symev::WriteFileAtomic(out / "config.json", cfg.dump(2) + "\n");
      }
      std::cout << (out / "config.json").string() << "\n";
    }
  } catch (const symev::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return symev::ExitStatus(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
