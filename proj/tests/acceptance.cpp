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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "symev/adam.hpp"
#include "symev/checkpoint.hpp"
#include "symev/embeddings.hpp"
#include "symev/labeling.hpp"
#include "symev/metrics.hpp"
#include "symev/network.hpp"
#include "symev/partitioning.hpp"
#include "symev/pipeline.hpp"
#include "symev/synthetic.hpp"

namespace symev {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

Outcome ParameterCounts() {
  Outcome out;
  const std::vector<std::size_t> sizes(14, 4);
  const auto wde = CountEmbeddingParams(EmbeddingVariant::kWdE, sizes, 16, 509);
  const auto sce = CountEmbeddingParams(EmbeddingVariant::kSCE, sizes, 2, 0);
  const auto ice = CountEmbeddingParams(EmbeddingVariant::kICE, sizes, 0, 0);
  out.Require(wde == 8144, "WdE " + std::to_string(wde));
  out.Require(sce == 112, "SCE " + std::to_string(sce));
  out.Require(ice == 56, "ICE " + std::to_string(ice));
  if (out.pass) out.detail = "WdE 8144, SCE 112, ICE 56";
  return out;
}

Outcome WeightingOracle() {
  Outcome out;
  const std::vector<int> l = {0, 1, 0, 1, 0, 0};
  const double w0 = TemporalWeights(l, DeriveTargets(l, 5).y, 5)[0];
  out.Require(w0 == 8.0, "w_t = " + std::to_string(w0));
  std::mt19937_64 rng(2024);
  std::bernoulli_distribution event(0.25);
  std::uniform_int_distribution<std::size_t> length(1, 40);
  std::uniform_int_distribution<std::size_t> horizon(1, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> labels(length(rng));
    for (auto& x : labels) x = event(rng) ? 1 : 0;
    const std::size_t k = horizon(rng);
    const auto w = TemporalWeights(labels, DeriveTargets(labels, k).y, k);
    const auto want = oracle::Weights(labels, k);
    for (std::size_t t = 0; t < labels.size(); ++t) {
      out.Require(w[t] == static_cast<double>(want[t]),
                  "sequence " + std::to_string(trial) + " step " + std::to_string(t));
    }
  }
  if (out.pass) out.detail = "w_t = 8; 1000 sequences exact";
  return out;
}

Outcome GradientSuite() {
  Outcome out;
  double worst = 0.0;
  for (const auto& tpl : fixture::GradientTemplates()) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      std::mt19937_64 rng(seed);
      const auto toy = fixture::MakeToy(rng, 3, 6);
      auto net = fixture::MakeNetwork<double>(tpl.variant, tpl.layers, toy, seed + 100);
      const auto r = oracle::CheckNetworkGradients(net, toy.inputs, toy.targets, toy.scales);
      worst = std::max(worst, r.max_rel_error);
      out.Require(r.max_rel_error < 1e-6 && r.checked == net.ParameterCount(),
                  tpl.name + " " + r.worst);
    }
  }
  std::ostringstream s;
  s << "max rel error " << worst;
  if (out.pass) out.detail = s.str();
  return out;
}

Outcome IceOrder() {
  Outcome out;
  std::mt19937_64 rng(7);
  const auto toy = fixture::MakeToy(rng, 8, 6);
  auto net = fixture::MakeNetwork<double>(EmbeddingVariant::kICE,
                                          {fixture::Lstm(4), fixture::Dense(1),
                                           fixture::Sigmoid()},
                                          toy, 7);
  auto params = net.Parameters();
  const auto cparams = std::as_const(net).Parameters();
  auto state = MakeAdamState<double>(cparams);
  AdamConfig cfg;
  cfg.learning_rate = 0.2;
  std::normal_distribution<double> noise(0.0, 1.0);
  auto& rows = net.embedding().tables();
  const auto& ordered = net.embedding().ordered();
  for (int step = 0; step < 200; ++step) {
    auto grads = net.ZeroGradients();
    for (std::size_t i = 0; i < toy.inputs.size(); ++i) {
      net.Accumulate(toy.inputs[i], toy.targets[i], toy.scales[i], grads);
    }
    for (std::size_t v = 0; v < rows.size(); ++v) {
      for (auto& g : grads[v].values()) g += noise(rng);
    }
    AdamStep<double>(params, grads, state, cfg);
    std::vector<std::vector<double>> before;
    for (const auto& row : rows) {
      before.emplace_back(row.values().begin(), row.values().end());
      std::sort(before.back().begin(), before.back().end());
    }
    net.ProjectConstraints();
    for (std::size_t v = 0; v < rows.size(); ++v) {
      std::vector<double> after(rows[v].values().begin(), rows[v].values().end());
      if (ordered[v]) {
        out.Require(std::is_sorted(after.begin(), after.end()),
                    "row " + std::to_string(v) + " unsorted at step " + std::to_string(step));
      }
      std::sort(after.begin(), after.end());
      out.Require(after == before[v],
                  "row " + std::to_string(v) + " values changed at step " + std::to_string(step));
    }
  }
  if (out.pass) out.detail = "200 steps, ordered rows sorted, multisets preserved";
  return out;
}

Outcome PartitioningOracles() {
  Outcome out;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 3.0);
  std::vector<double> values(10000);
  for (auto& x : values) x = normal(rng);
  for (std::size_t s : {2u, 4u, 50u}) {
    const auto splits = MaxEntropySplits(values, s);
    std::vector<std::size_t> counts(s, 0);
    for (double x : values) ++counts[SymbolizeContinuous(x, splits)];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    const std::size_t target = values.size() / s;
    out.Require(*lo + 1 >= target && *hi <= target + 1,
                "occupancy s=" + std::to_string(s) + " range " + std::to_string(*lo) + ".." +
                    std::to_string(*hi));
  }
  std::size_t instances = 0;
  std::size_t unique = 0;
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  std::uniform_int_distribution<int> small(0, 6);
  for (std::size_t n = 2; n <= 15; ++n) {
    for (std::size_t s = 2; s <= 4; ++s) {
      for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> v(n);
        const bool ties = rep % 2 == 1;
        for (auto& x : v) x = ties ? small(rng) : real(rng);
        const auto want = oracle::ExhaustiveJenks(v, s);
        if (!std::isfinite(want.sse)) {
          bool raised = false;
          try {
            JenksSplits(v, s);
          } catch (const Error& e) {
            raised = e.code() == ErrorCode::kTooFewDistinct;
          }
          out.Require(raised, "jenks n=" + std::to_string(n) + " expected TooFewDistinct");
          continue;
        }
        const auto got = JenksSplits(v, s);
        const std::string tag = "jenks n=" + std::to_string(n) + " s=" + std::to_string(s) +
                                " rep " + std::to_string(rep);
        const double sse = oracle::SplitSse(v, got);
        out.Require(got.size() == s - 1 && std::abs(sse - want.sse) <= 1e-9 * (1.0 + want.sse),
                    tag + " not SSE-optimal");
        if (want.optima == 1) {
          out.Require(got == want.splits, tag + " splits differ from the unique optimum");
          ++unique;
        }
        ++instances;
      }
    }
  }
  if (out.pass) {
    out.detail = "occupancy ok for s in {2,4,50}; " + std::to_string(instances) +
                 " Jenks instances optimal, " +
                 std::to_string(unique) + " with a unique optimum match exactly";
  }
  return out;
}

Outcome MetricsOracles() {
  Outcome out;
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_int_distribution<int> coarse(0, 9);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  std::size_t sets = 0;
  while (sets < 500) {
    const std::size_t n = size(rng);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    const bool ties = sets % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = fine(rng) < 0.3 ? 1 : 0;
      scores[i] = ties ? coarse(rng) / 10.0 : fine(rng);
    }
    const auto pos = std::count(labels.begin(), labels.end(), 1);
    if (pos == 0 || pos == static_cast<long>(n)) continue;
    const std::string tag = "set " + std::to_string(sets);
    out.Require(Auc(scores, labels) == oracle::PairCountAuc(scores, labels), tag + " auc");
    for (double cap : {0.0, 0.05, 0.2}) {
      const auto got = BalancedAccuracyAtFpr(scores, labels, cap);
      const auto want = oracle::ThresholdSweep(scores, labels, cap);
      out.Require(got.balanced_accuracy == want.balanced_accuracy &&
                      got.threshold == want.threshold && got.fpr <= cap,
                  tag + " balanced accuracy at " + std::to_string(cap));
    }
    ++sets;
  }
  if (out.pass) out.detail = "500 sets exact";
  return out;
}

template <typename T>
bool SameBits(const Tensor<T>& a, const Tensor<T>& b) {
  return a.shape() == b.shape() &&
         std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(T)) == 0;
}

Outcome ChoppingEquivalence() {
  Outcome out;
  for (const auto& tpl : fixture::GradientTemplates()) {
    std::mt19937_64 rng(51);
    const auto toy = fixture::MakeToy(rng, 4, 6);
    const auto net = fixture::MakeNetwork<double>(tpl.variant, tpl.layers, toy, 52);
    for (const auto& piece : toy.inputs) {
      EmbeddingCache c1;
      const auto e1 = net.embedding().Forward(piece, c1);
      ChunkTrace<double> chunk;
      const auto single = net.EncodeChunk(e1, chunk);
      ForwardTrace<double> t1;
      out.Require(SameBits(net.ChopAndPool(e1, 1, t1), single), tpl.name + " C=1");
      for (std::size_t c : {2u, 3u}) {
        SymbolSequence repeated = piece;
        for (std::size_t i = 1; i < c; ++i) repeated.Append(piece);
        EmbeddingCache cr;
        const auto er = net.embedding().Forward(repeated, cr);
        ForwardTrace<double> tr;
        out.Require(SameBits(net.ChopAndPool(er, c, tr), single),
                    tpl.name + " C=" + std::to_string(c));
      }
    }
  }
  if (out.pass) out.detail = "C=1 bitwise; repeated chunks pool to the single feature";
  return out;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct RunArtifacts {
  double auc = 0.0;
  std::size_t epochs = 0;
  WeightSums weights;
  std::string checkpoint;
  std::string metrics;
};

RunArtifacts RunPipeline(EmbeddingVariant variant, const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "data.csv", std::ios::binary);
    csv << SyntheticCsv(SyntheticConfig{});
  }
  auto cfg = PipelineConfig::FromJson(SyntheticPipelineJson(variant, "data.csv", 1), dir);
  cfg.output_dir = dir / "out";
  fs::create_directories(cfg.output_dir);
  CmdPartition(cfg);
  CmdSymbolize(cfg, cfg.PartitionPath(), cfg.csv, cfg.SymbolizedPath());
  const auto trained = CmdTrain(cfg, cfg.PartitionPath(), cfg.SymbolizedPath());
  const auto eval = CmdEvaluate(cfg.CheckpointPath(), cfg.PartitionPath(), cfg.SymbolizedPath(),
                                cfg.max_fpr, cfg.MetricsPath());
  RunArtifacts r;
  r.auc = eval.auc;
  r.epochs = trained.result.history.size();
  r.weights = trained.renormalized_weights;
  r.checkpoint = Slurp(cfg.CheckpointPath());
  r.metrics = Slurp(cfg.MetricsPath());
  return r;
}

const std::vector<EmbeddingVariant> kVariants = {EmbeddingVariant::kWdE, EmbeddingVariant::kSCE,
                                                 EmbeddingVariant::kICE};

fs::path RunDir(EmbeddingVariant variant, int run) {
  return fs::temp_directory_path() /
         ("symev_acceptance_" + std::string(VariantName(variant)) + "_" + std::to_string(run));
}

std::vector<RunArtifacts> first_runs;

Outcome EndToEnd() {
  Outcome out;
  std::ostringstream s;
  for (auto variant : kVariants) {
    const auto r = RunPipeline(variant, RunDir(variant, 1));
    const std::string name(VariantName(variant));
    out.Require(r.auc >= 0.95, name + " test AUC " + std::to_string(r.auc));
    out.Require(r.epochs <= 20, name + " ran " + std::to_string(r.epochs) + " epochs");
    const double scale = std::max(r.weights.positive, r.weights.negative);
    const double rel = std::abs(r.weights.positive - r.weights.negative) / scale;
    out.Require(rel <= 1e-9, name + " class weight gap " + std::to_string(rel));
    s << name << " AUC " << r.auc << " (" << r.epochs << " epochs); ";
    first_runs.push_back(r);
  }
  if (out.pass) out.detail = s.str() + "class weights equal";
  return out;
}

Outcome Determinism() {
  Outcome out;
  if (first_runs.size() != kVariants.size()) {
    out.Require(false, "end-to-end runs missing");
    return out;
  }
  for (std::size_t i = 0; i < kVariants.size(); ++i) {
    const auto r = RunPipeline(kVariants[i], RunDir(kVariants[i], 2));
    const std::string name(VariantName(kVariants[i]));
    out.Require(r.checkpoint == first_runs[i].checkpoint, name + " checkpoint differs");
    out.Require(r.metrics == first_runs[i].metrics, name + " metrics differ");
  }
  for (auto variant : kVariants) {
    fs::remove_all(RunDir(variant, 1));
    fs::remove_all(RunDir(variant, 2));
  }
  if (out.pass) out.detail = "checkpoints and metrics byte-identical for WdE, SCE, ICE";
  return out;
}

}  // namespace
}  // namespace symev

int main() {
  using symev::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"parameter counts", symev::ParameterCounts},
      {"temporal weighting", symev::WeightingOracle},
      {"gradient suite", symev::GradientSuite},
      {"ICE order invariant", symev::IceOrder},
      {"partitioning oracles", symev::PartitioningOracles},
      {"metrics oracles", symev::MetricsOracles},
      {"chopping equivalence", symev::ChoppingEquivalence},
      {"end-to-end separability", symev::EndToEnd},
      {"determinism", symev::Determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %zu. %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += outcome.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
