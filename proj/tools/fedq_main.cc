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

// fedq: run, compare and sweep quantized/DP federated averaging experiments.
//
//   fedq run --config cfg.json [--seed S] [--out DIR] [--format csv|jsonl]
//   fedq compare baseline.csv variant.csv [--json]
//   fedq sweep --config cfg.json --grid "epsilon=100,10000;schedule=cosine"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "fedq/errors.h"
#include "fedq/harness.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string OptAcc(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string OptRound(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "n/a";
}

json SummaryJson(const fedq::RunSummary& s) {
  json j = {{"total_bits", s.total_bits},
            {"downlink_bits", s.downlink_bits},
            {"uplink_bits", s.uplink_bits}};
  j["best_accuracy"] = s.best_accuracy ? json(*s.best_accuracy) : json(nullptr);
  j["best_round"] = s.best_round ? json(*s.best_round) : json(nullptr);
  return j;
}

std::string Sanitize(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                      c == '-' || c == '_' || c == '=';
    out += keep ? c : '_';
  }
  return out;
}

int Run(const std::string& config_path, std::optional<std::uint64_t> seed,
        const std::string& out_flag, const std::string& format, int threads) {
  fedq::RunConfig cfg = fedq::ParseConfigFile(config_path);
  if (seed) cfg.experiment.seed = *seed;
  const std::string dir = fedq::ResolveOutDir(out_flag);
  const auto out = fedq::RunToDirectory(
      cfg, dir, fedq::ParseMetricsFormat(format), threads);
  const auto summary = fedq::Summarize(out.result.records);
  std::cout << "rounds=" << out.result.records.size()
            << " total_bits=" << summary.total_bits
            << " best_test_acc=" << OptAcc(summary.best_accuracy)
            << " best_round=" << OptRound(summary.best_round) << "\n"
            << "metrics: " << out.metrics_path << "\n"
            << "manifest: " << out.manifest_path << "\n";
  return 0;
}

int Compare(const std::string& a, const std::string& b, bool as_json) {
  const auto c = fedq::CompareRunFiles(a, b);
  if (as_json) {
    json j = {{"baseline", SummaryJson(c.baseline)},
              {"variant", SummaryJson(c.variant)},
              {"reduction", c.reduction}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "baseline: total_bits=" << c.baseline.total_bits
            << " best_test_acc=" << OptAcc(c.baseline.best_accuracy)
            << " best_round=" << OptRound(c.baseline.best_round) << "\n"
            << "variant:  total_bits=" << c.variant.total_bits
            << " best_test_acc=" << OptAcc(c.variant.best_accuracy)
            << " best_round=" << OptRound(c.variant.best_round) << "\n"
            << "reduction: " << Percent(c.reduction) << "\n";
  return 0;
}

int Sweep(const std::string& config_path, const std::string& grid,
          std::optional<std::uint64_t> seed, const std::string& out_flag,
          const std::string& format, int jobs) {
  std::ifstream in(config_path);
  if (!in) throw fedq::IoError(config_path, "cannot open config file");
  json base;
  try {
    base = json::parse(in);
  } catch (const json::parse_error& e) {
    throw fedq::ConfigError("<document>",
                            std::string("invalid JSON: ") + e.what());
  }
  if (seed) base["seed"] = *seed;
  const auto cells = fedq::ExpandGrid(base, fedq::ParseGrid(grid));

  // Validate every cell before running any.
  std::vector<fedq::RunConfig> configs;
  for (const auto& cell : cells) {
    try {
      configs.push_back(fedq::ParseConfig(cell.config));
    } catch (const fedq::ConfigError& e) {
      throw fedq::ConfigError(cell.name + ": " + e.key(), e.what());
    }
  }

  const std::string root = fedq::ResolveOutDir(out_flag);
  const auto fmt = fedq::ParseMetricsFormat(format);
  std::vector<fedq::RunSummary> summaries(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        char prefix[16];
        std::snprintf(prefix, sizeof prefix, "%03zu_", i);
        const auto dir = (std::filesystem::path(root) /
                          (prefix + Sanitize(cells[i].name)))
                             .string();
        const auto out = fedq::RunToDirectory(configs[i], dir, fmt, 1);
        summaries[i] = fedq::Summarize(out.result.records);
        std::lock_guard<std::mutex> lock(log_mu);
        std::cout << "[" << i + 1 << "/" << cells.size() << "] "
                  << cells[i].name << " -> " << dir << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(log_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::max(jobs, 1); ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  const auto summary_path =
      (std::filesystem::path(root) / "summary.csv").string();
  std::ofstream out(summary_path, std::ios::trunc);
  if (!out) throw fedq::IoError(summary_path, "cannot open for writing");
  out << "cell,total_bits,downlink_bits,uplink_bits,reduction_vs_first,"
         "best_test_acc,best_round\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& s = summaries[i];
    const double reduction =
        summaries[0].total_bits > 0
            ? 1.0 - static_cast<double>(s.total_bits) /
                        static_cast<double>(summaries[0].total_bits)
            : 0.0;
    char red[32];
    std::snprintf(red, sizeof red, "%.6f", reduction);
    out << '"' << cells[i].name << "\"," << s.total_bits << ','
        << s.downlink_bits << ',' << s.uplink_bits << ',' << red << ','
        << (s.best_accuracy ? OptAcc(s.best_accuracy) : "") << ','
        << (s.best_round ? std::to_string(*s.best_round) : "") << '\n';
  }
  std::cout << "summary: " << summary_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated averaging simulator with adaptive quantization and "
               "Laplace differential privacy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fedq::kVersion));

  std::string config_path, out_dir, format = "csv", grid;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  int jobs = 1;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir,
                  "Output directory (default $FEDQ_OUT_DIR or ./runs)");
  run->add_option("--format", format, "Metrics format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--threads", threads, "Client worker threads")
      ->check(CLI::PositiveNumber);

  std::string baseline, variant;
  bool as_json = false;
  auto* compare = app.add_subcommand("compare", "Compare two metrics files");
  compare->add_option("baseline", baseline, "Baseline metrics (.csv/.jsonl)")
      ->required();
  compare->add_option("variant", variant, "Variant metrics (.csv/.jsonl)")
      ->required();
  compare->add_flag("--json", as_json, "Print JSON");

  auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over a config");
  sweep->add_option("--config", config_path, "Base JSON config")->required();
  sweep->add_option("--grid", grid,
                    "Axes, e.g. \"epsilon=100,10000;schedule=fp32,cosine\"")
      ->required();
  sweep->add_option("--seed", seed, "Override the config seed");
  sweep->add_option("--out", out_dir,
                    "Output directory (default $FEDQ_OUT_DIR or ./runs)");
  sweep->add_option("--format", format, "Metrics format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  sweep->add_option("--jobs", jobs, "Cells run in parallel")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return Run(config_path, seed, out_dir, format, threads);
    if (*compare) return Compare(baseline, variant, as_json);
    if (*sweep) return Sweep(config_path, grid, seed, out_dir, format, jobs);
  } catch (const fedq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fedq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
