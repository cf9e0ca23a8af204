// Copyright 2026 The fedq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fedq/data.h"
#include "fedq/federation.h"
#include "fedq/metrics.h"
#include "fedq/privacy.h"
#include "fedq/quantizer.h"
#include "fedq/scheduler.h"
#include "oracles.h"

namespace fedq {
namespace {

using testing::BruteForceE0;
using testing::CentralizedSgd;
using testing::OracleImportance;
using testing::OracleSensitivity;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double UniformIn(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * Uniform01(rng);
}

struct Blobs {
  LabeledDataset train;
  LabeledDataset test;
};

Blobs MakeBlobs(int k, std::size_t dim, std::size_t per_class,
                std::size_t test_per_class, double spread,
                std::uint64_t seed) {
  Rng a = MakeRng(seed, Stream::kData);
  Rng b = MakeRng(seed, Stream::kTestData);
  return {SyntheticBlobs(k, dim, per_class, spread, a),
          SyntheticBlobs(k, dim, test_per_class, spread, b)};
}

std::string Fmt(const char* format, double a = 0, double b = 0, double c = 0,
                double d = 0, double e = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, a, b, c, d, e);
  return buf;
}

// Cosine 32->8 against static 32 on a 784x10 logistic model, where the
// per-tensor overhead is negligible next to the codes.
Outcome CommunicationRatio() {
  const Blobs d = MakeBlobs(10, 784, 10, 2, 1.0, 1);
  ExperimentConfig cfg;
  cfg.model = {ModelKind::kLogistic, 784, 0, 10};
  cfg.rounds = 1000;
  cfg.num_clients = 50;
  cfg.clients_per_round = 5;
  cfg.local_epochs = 1;
  cfg.batch_size = 64;
  cfg.seed = 1;
  cfg.eval_every = 1000;
  cfg.schedule.mode = ScheduleMode::kStatic;
  cfg.schedule.static_bits = 32;
  const auto stat = RunExperiment(cfg, d.train, d.test);
  cfg.schedule.mode = ScheduleMode::kCosine;
  cfg.schedule.b_max = 32;
  cfg.schedule.b_min = 8;
  const auto cos = RunExperiment(cfg, d.train, d.test);
  const double ratio = static_cast<double>(cos.total_bits()) /
                       static_cast<double>(stat.total_bits());
  return {std::abs(ratio - 0.625) <= 0.005,
          Fmt("ratio %.5f (reduction %.2f%%)", ratio, 100.0 * (1.0 - ratio))};
}

// Dynamic uplink never exceeds cosine, and is strictly below it whenever a
// selected client scores below 1.
Outcome DynamicDominatesCosine() {
  const Blobs d = MakeBlobs(3, 2, 200, 100, 1.0, 3);
  bool ok = true;
  double worst = 1.0, best = 0.0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig cfg;
    cfg.model = {ModelKind::kLogistic, 2, 0, 3};
    cfg.rounds = 200;
    cfg.num_clients = 20;
    cfg.clients_per_round = 5;
    cfg.local_epochs = 1;
    cfg.seed = seed;
    cfg.eval_every = 200;
    cfg.schedule.mode = ScheduleMode::kCosine;
    cfg.schedule.b_max = 32;
    cfg.schedule.b_min = 8;
    const auto cos = RunExperiment(cfg, d.train, d.test);
    for (double lh : {0.25, 0.5, 0.75, 1.0}) {
      ExperimentConfig dyn_cfg = cfg;
      dyn_cfg.schedule.mode = ScheduleMode::kDynamic;
      dyn_cfg.schedule.lambda_h = lh;
      const auto dyn = RunExperiment(dyn_cfg, d.train, d.test);
      bool below_one = false;
      for (std::size_t t = 0; t < dyn.records.size(); ++t) {
        const auto& sel = dyn.records[t].selected;
        ok &= sel == cos.records[t].selected;
        ok &= dyn.records[t].uplink_bits <= cos.records[t].uplink_bits;
        std::int64_t n_max = 0;
        for (int id : sel) {
          n_max = std::max<std::int64_t>(
              n_max, static_cast<std::int64_t>(dyn.partition.assignments[id].size()));
        }
        for (int id : sel) {
          const auto& idx = dyn.partition.assignments[id];
          const double nu = OracleImportance(
              LabelHistogram(d.train, idx),
              static_cast<std::int64_t>(idx.size()), n_max, lh);
          below_one |= nu < 1.0 - 1e-12;
        }
      }
      const bool strict = dyn.uplink_bits < cos.uplink_bits;
      ok &= dyn.uplink_bits <= cos.uplink_bits;
      if (below_one) ok &= strict;
      const double red = 1.0 - static_cast<double>(dyn.uplink_bits) /
                                   static_cast<double>(cos.uplink_bits);
      worst = std::min(worst, red);
      best = std::max(best, red);
      ++runs;
    }
  }
  return {ok, Fmt("%.0f runs; dynamic uplink reduction vs cosine "
                  "%.2f%%..%.2f%%",
                  runs, 100.0 * worst, 100.0 * best)};
}

Outcome QuantizerUnbiased() {
  Rng rng(31);
  constexpr int kTensors = 1000;
  constexpr int kTrials = 100000;
  bool ok = true;
  double worst_ratio = 0.0;
  for (int i = 0; i < kTensors; ++i) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<double> v(n);
    const double scale = std::exp(UniformIn(rng, -5, 5));
    for (double& x : v) x = UniformIn(rng, -scale, scale);
    const std::size_t probe = rng() % n;
    const DenseTensor t({n}, v);
    for (int b : {2, 4, 8}) {
      double sum = 0.0;
      double s = 1.0;
      for (int k = 0; k < kTrials; ++k) {
        const QuantizedTensor q = Quantize(t, b, rng);
        s = q.scale;
        const DenseTensor back = Dequantize(q);
        const double err = std::abs(back[probe] - v[probe]);
        if (err > (1.0 / s) * (1.0 + 1e-12)) ok = false;
        sum += back[probe];
      }
      const double bound = 4.0 * (1.0 / (2.0 * s)) * std::pow(10.0, -2.5) * 2.0;
      const double dev = std::abs(sum / kTrials - v[probe]);
      worst_ratio = std::max(worst_ratio, dev / bound);
      if (dev > bound) ok = false;
    }
  }
  return {ok, Fmt("3000 cases x 1e5 trials; worst |bias|/bound %.3f",
                  worst_ratio)};
}

Outcome SensitivityMatchesOracle() {
  Rng rng(41);
  double worst = 0.0;
  bool ok = true;
  int branch[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    const double lambda = i % 4 == 0 ? 0.0 : std::exp(UniformIn(rng, -6, 3));
    const double eta = UniformIn(rng, 0.01, 0.5);
    const int e = 1 + static_cast<int>(rng() % 30);
    const auto n = 1 + static_cast<std::int64_t>(rng() % 1000);
    const double xi = UniformIn(rng, 0.1, 200.0);
    const double want = OracleSensitivity(lambda, eta, e, n, xi);
    const double got = Sensitivity({lambda, eta, e, n, xi});
    worst = std::max(worst, std::abs(got - want) / want);
    if (lambda == 0.0) {
      ++branch[0];
    } else {
      ++branch[e < BruteForceE0(lambda, eta, n) ? 1 : 2];
      ok &= ComputeE0(lambda, eta, n) == BruteForceE0(lambda, eta, n);
    }
  }
  ok &= worst <= 1e-10;
  double cont = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double eta = UniformIn(rng, 0.01, 0.5);
    const int e = 1 + static_cast<int>(rng() % 10);
    const auto n = 1 + static_cast<std::int64_t>(rng() % 500);
    const double zero = Sensitivity({0.0, eta, e, n, 1.0});
    cont = std::max(cont,
                    std::abs(Sensitivity({1e-9, eta, e, n, 1.0}) - zero) / zero);
  }
  ok &= cont <= 1e-6;
  ok &= branch[0] > 0 && branch[1] > 0 && branch[2] > 0;
  return {ok, Fmt("max rel err %.2e; branches %.0f/%.0f/%.0f; "
                  "continuity rel err %.2e",
                  worst, branch[0], branch[1], branch[2], cont)};
}

Outcome LaplaceStatistics() {
  bool ok = true;
  std::string detail;
  for (double scale : {0.01, 1.0, 250.0}) {
    Rng rng(static_cast<std::uint64_t>(scale * 1000) + 5);
    constexpr int kDraws = 1000000;
    double sum = 0.0, abs_sum = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = SampleLaplace(scale, rng);
      sum += x;
      abs_sum += std::abs(x);
    }
    const double mean = sum / kDraws, mad = abs_sum / kDraws;
    ok &= std::abs(mean) < 4.0 * scale * std::sqrt(2.0) / 1e3;
    ok &= std::abs(mad - scale) <= 0.02 * scale;
    detail += Fmt("scale %g: mean/scale %.1e, mad/scale %.4f; ", scale,
                  mean / scale, mad / scale);
  }
  return {ok, detail};
}

// Final-round test accuracy averaged over five seeds.
Outcome Convergence() {
  const auto mean_acc = [](const std::function<void(ExperimentConfig&)>& tweak) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Blobs d = MakeBlobs(3, 2, 200, 100, 1.0, seed);
      ExperimentConfig cfg;
      cfg.model = {ModelKind::kLogistic, 2, 0, 3};
      cfg.rounds = 200;
      cfg.num_clients = 20;
      cfg.clients_per_round = 5;
      cfg.local_epochs = 5;
      cfg.batch_size = 64;
      cfg.learning_rate = 0.1;
      cfg.seed = seed;
      cfg.eval_every = 200;
      cfg.partition = {PartitionKind::kDirichlet, 0.5, 1.2};
      cfg.schedule.mode = ScheduleMode::kFloat32;
      tweak(cfg);
      sum += *RunExperiment(cfg, d.train, d.test).records.back().test_acc;
    }
    return sum / 5.0;
  };
  const double fp32 = mean_acc([](ExperimentConfig&) {});
  const double int8 = mean_acc([](ExperimentConfig& c) {
    c.schedule.mode = ScheduleMode::kStatic;
    c.schedule.static_bits = 8;
  });
  const double dyn = mean_acc([](ExperimentConfig& c) {
    c.schedule.mode = ScheduleMode::kDynamic;
    c.schedule.b_max = 32;
    c.schedule.b_min = 8;
    c.schedule.lambda_h = 0.75;
  });
  const double dp4 =
      mean_acc([](ExperimentConfig& c) { c.dp = DpConfig{1e4, 100.0}; });
  const double dp2 =
      mean_acc([](ExperimentConfig& c) { c.dp = DpConfig{1e2, 100.0}; });
  const bool ok = fp32 >= 0.90 && std::abs(int8 - fp32) <= 0.03 &&
                  std::abs(dyn - fp32) <= 0.03 && fp32 - dp4 <= 0.05 &&
                  fp32 - dp2 > fp32 - dp4;
  return {ok, Fmt("fp32 %.4f int8 %.4f dynamic %.4f dp(1e4) %.4f dp(1e2) %.4f",
                  fp32, int8, dyn, dp4, dp2)};
}

// A single always-selected client with 32-bit links tracks plain SGD.
Outcome ReferenceEquivalence() {
  const Blobs d = MakeBlobs(3, 2, 100, 20, 1.0, 7);
  ExperimentConfig cfg;
  cfg.model = {ModelKind::kLogistic, 2, 0, 3};
  cfg.rounds = 100;
  cfg.num_clients = 1;
  cfg.clients_per_round = 1;
  cfg.local_epochs = 2;
  cfg.batch_size = 32;
  cfg.seed = 7;
  cfg.schedule.mode = ScheduleMode::kStatic;
  cfg.schedule.static_bits = 32;
  std::vector<ParamSet> fed;
  RunOptions opts;
  opts.on_round = [&](const RoundRecord&, const ParamSet& p) {
    fed.push_back(p);
  };
  const auto res = RunExperiment(cfg, d.train, d.test, opts);
  const IndexList& order = res.partition.assignments.at(0);
  ParamSet central = res.initial_params;
  bool ok = fed.size() == static_cast<std::size_t>(cfg.rounds);
  double worst = 0.0;
  for (std::size_t t = 0; t < fed.size(); ++t) {
    central = CentralizedSgd(cfg.model, central, d.train, order,
                             cfg.local_epochs, 32, cfg.learning_rate);
    const double alpha = std::max(MaxAbs(central), MaxAbs(fed[t]));
    const double bound =
        static_cast<double>(t + 1) * alpha / 2147483647.0 * 10.0;
    const double err = MaxAbsDiff(central, fed[t]);
    worst = std::max(worst, err / bound);
    ok &= err <= bound;
  }
  return {ok, Fmt("%.0f rounds; worst err/bound %.3f", fed.size(), worst)};
}

Outcome Determinism() {
  const Blobs d = MakeBlobs(3, 2, 200, 100, 1.0, 9);
  ExperimentConfig cfg;
  cfg.model = {ModelKind::kMlp, 2, 8, 3};
  cfg.rounds = 40;
  cfg.num_clients = 12;
  cfg.clients_per_round = 4;
  cfg.local_epochs = 2;
  cfg.batch_size = 16;
  cfg.seed = 9;
  cfg.eval_every = 5;
  cfg.schedule.mode = ScheduleMode::kDynamic;
  cfg.schedule.b_max = 16;
  cfg.schedule.b_min = 4;
  cfg.dp = DpConfig{50.0, 10.0};
  const auto a = RunExperiment(cfg, d.train, d.test, {1, nullptr});
  const auto b = RunExperiment(cfg, d.train, d.test, {1, nullptr});
  const auto c = RunExperiment(cfg, d.train, d.test, {4, nullptr});
  bool ok = true;
  for (auto f : {MetricsFormat::kCsv, MetricsFormat::kJsonl}) {
    ok &= FormatMetrics(a.records, f) == FormatMetrics(b.records, f);
    ok &= FormatMetrics(a.records, f) == FormatMetrics(c.records, f);
  }
  ok &= a.records == c.records && a.final_params == c.final_params;
  ok &= a.final_params == b.final_params;
  return {ok, "repeat and 1 vs 4 threads identical"};
}

Outcome ScheduleEndpoints() {
  const Blobs d = MakeBlobs(3, 2, 50, 10, 1.0, 11);
  ExperimentConfig cfg;
  cfg.model = {ModelKind::kLogistic, 2, 0, 3};
  cfg.rounds = 100;
  cfg.num_clients = 5;
  cfg.clients_per_round = 2;
  cfg.local_epochs = 1;
  cfg.seed = 11;
  cfg.schedule.mode = ScheduleMode::kCosine;
  cfg.schedule.b_max = 32;
  cfg.schedule.b_min = 2;
  const auto res = RunExperiment(cfg, d.train, d.test);
  const auto path =
      (std::filesystem::temp_directory_path() / "fedq_acceptance_bits.csv")
          .string();
  ExportMetrics(res.records, MetricsFormat::kCsv, path);
  const auto recs = ReadMetrics(path);
  std::filesystem::remove(path);
  bool ok = recs.size() == 100 && recs.front().mean_bits == 32.0 &&
            recs.back().mean_bits == 2.0;
  for (std::size_t t = 1; t < recs.size(); ++t) {
    ok &= recs[t].mean_bits <= recs[t - 1].mean_bits;
  }
  ScheduleConfig sc = cfg.schedule;
  sc.total_rounds = cfg.rounds;
  ok &= ScheduleBits(sc, 0, std::nullopt) == 32 &&
        ScheduleBits(sc, cfg.rounds - 1, std::nullopt) == 2;
  return {ok, Fmt("exported b(0)=%.0f b(T-1)=%.0f over %.0f rounds",
                  recs.empty() ? 0 : recs.front().mean_bits,
                  recs.empty() ? 0 : recs.back().mean_bits, recs.size())};
}

}  // namespace
}  // namespace fedq

int main() {
  using Check = std::pair<const char*, std::function<fedq::Outcome()>>;
  const std::vector<Check> checks = {
      {"1 cosine communication ratio", fedq::CommunicationRatio},
      {"2 dynamic <= cosine uplink", fedq::DynamicDominatesCosine},
      {"3 quantization unbiasedness", fedq::QuantizerUnbiased},
      {"4 sensitivity oracle", fedq::SensitivityMatchesOracle},
      {"5 laplace statistics", fedq::LaplaceStatistics},
      {"6 end-to-end convergence", fedq::Convergence},
      {"7 reference equivalence", fedq::ReferenceEquivalence},
      {"8 determinism", fedq::Determinism},
      {"9 schedule endpoints", fedq::ScheduleEndpoints},
  };
  int failures = 0;
  for (const auto& [name, run] : checks) {
    const auto start = std::chrono::steady_clock::now();
    fedq::Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("%s criterion %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL",
                name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
