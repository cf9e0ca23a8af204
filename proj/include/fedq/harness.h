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

// Experiment orchestration for the command-line tool: single runs written to
// an output directory with a manifest, and Cartesian sweeps.

#ifndef FEDQ_HARNESS_H_
#define FEDQ_HARNESS_H_

#include <string>
#include <vector>

#include "fedq/config.h"
#include "fedq/metrics.h"
#include "json.hpp"

namespace fedq {

inline constexpr const char* kVersion = "0.1.0";
// Environment variable holding the default output directory.
inline constexpr const char* kOutDirEnv = "FEDQ_OUT_DIR";

// Self-description written next to every metrics file.
struct RunManifest {
  nlohmann::json config;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::string started_at;  // ISO-8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;
};

nlohmann::json ToJson(const RunManifest& m);
void WriteManifest(const RunManifest& m, const std::string& path);

// Output directory: `flag` when non-empty, else $FEDQ_OUT_DIR, else "runs".
std::string ResolveOutDir(const std::string& flag);

struct RunOutputs {
  std::string metrics_path;
  std::string manifest_path;
  ExperimentResult result;
};

// Prepares data, runs the experiment, writes <dir>/metrics.<fmt> and
// <dir>/manifest.json.
RunOutputs RunToDirectory(RunConfig cfg, const std::string& dir,
                          MetricsFormat format, int threads);

// One sweep axis, e.g. {"epsilon", {"100", "10000"}}.
struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

// "key=v1,v2;key2=w1,w2". Supported keys:
//   epsilon            number or "off"
//   schedule           fp32 | static:<b> | cosine[:<b_max>:<b_min>]
//                      | dynamic[:<b_max>:<b_min>[:<lambda_h>]]
//   clients            N
//   clients_per_round  P
//   rounds, seed, lambda_h
// Throws ConfigError("grid", ...) for malformed specs or unknown keys.
std::vector<GridAxis> ParseGrid(const std::string& spec);

struct SweepCell {
  std::string name;  // e.g. "epsilon=100,schedule=cosine"
  nlohmann::json config;
};

// Cartesian product of the axes applied to `base` (a config document). The
// first axis varies slowest.
std::vector<SweepCell> ExpandGrid(const nlohmann::json& base,
                                  const std::vector<GridAxis>& axes);

}  // namespace fedq

#endif  // FEDQ_HARNESS_H_
