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

#include "fedq/harness.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedq/errors.h"

namespace fedq {
namespace {

using nlohmann::json;

std::string UtcNow() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

json Number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    if (value.find_first_of(".eE") == std::string::npos) {
      const long long v = std::stoll(value, &used);
      if (used == value.size()) return json(v);
    } else {
      const double v = std::stod(value, &used);
      if (used == value.size()) return json(v);
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("grid." + key, "expected a number, got '" + value + "'");
}

void ApplySchedule(json& doc, const std::string& value) {
  const auto parts = Split(value, ':');
  json s = doc.contains("schedule") && doc["schedule"].is_object()
               ? doc["schedule"]
               : json::object();
  const std::string& mode = parts.at(0);
  s["mode"] = mode;
  if (mode == "fp32") {
    if (parts.size() != 1) throw ConfigError("grid.schedule", "fp32 takes no arguments");
  } else if (mode == "static") {
    if (parts.size() != 2) {
      throw ConfigError("grid.schedule", "expected static:<bits>");
    }
    s["bits"] = Number("schedule", parts[1]);
  } else if (mode == "cosine" || mode == "dynamic") {
    const std::size_t max_parts = mode == "cosine" ? 3 : 4;
    if (parts.size() != 1 && parts.size() != 3 && parts.size() != max_parts) {
      throw ConfigError("grid.schedule",
                        "expected " + mode + "[:<b_max>:<b_min>" +
                            (mode == "dynamic" ? "[:<lambda_h>]]" : "]"));
    }
    if (parts.size() >= 3) {
      s["b_max"] = Number("schedule", parts[1]);
      s["b_min"] = Number("schedule", parts[2]);
    }
    if (parts.size() == 4) s["lambda_h"] = Number("schedule", parts[3]);
  } else {
    throw ConfigError("grid.schedule", "unknown schedule '" + mode + "'");
  }
  doc["schedule"] = s;
}

void Apply(json& doc, const std::string& key, const std::string& value) {
  if (key == "epsilon") {
    if (value == "off") {
      doc["privacy"] = nullptr;
    } else {
      json p = doc.contains("privacy") && doc["privacy"].is_object()
                   ? doc["privacy"]
                   : json::object();
      p["epsilon"] = Number(key, value);
      doc["privacy"] = p;
    }
  } else if (key == "schedule") {
    ApplySchedule(doc, value);
  } else if (key == "lambda_h") {
    json s = doc.contains("schedule") && doc["schedule"].is_object()
                 ? doc["schedule"]
                 : json::object();
    s["lambda_h"] = Number(key, value);
    doc["schedule"] = s;
  } else if (key == "clients" || key == "clients_per_round" ||
             key == "rounds" || key == "seed") {
    doc[key] = Number(key, value);
  } else {
    throw ConfigError("grid." + key, "unsupported sweep key");
  }
}

}  // namespace

json ToJson(const RunManifest& m) {
  return json{{"config", m.config},         {"version", m.version},
              {"seed", m.seed},             {"started_at", m.started_at},
              {"finished_at", m.finished_at}, {"outputs", m.outputs}};
}

void WriteManifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << ToJson(m).dump(2) << '\n';
  if (!out) throw IoError(path, "write failed");
}

std::string ResolveOutDir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "runs";
}

RunOutputs RunToDirectory(RunConfig cfg, const std::string& dir,
                          MetricsFormat format, int threads) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());

  RunManifest manifest;
  manifest.seed = cfg.experiment.seed;
  manifest.started_at = UtcNow();

  Datasets data = PrepareData(cfg);
  manifest.config = ToJson(cfg);

  RunOutputs out;
  RunOptions options;
  options.threads = threads;
  out.result = RunExperiment(cfg.experiment, data.train, data.test, options);

  const auto base = std::filesystem::path(dir);
  out.metrics_path = (base / ("metrics." + ToString(format))).string();
  out.manifest_path = (base / "manifest.json").string();
  ExportMetrics(out.result.records, format, out.metrics_path);

  manifest.finished_at = UtcNow();
  manifest.outputs = {out.metrics_path};
  WriteManifest(manifest, out.manifest_path);
  return out;
}

std::vector<GridAxis> ParseGrid(const std::string& spec) {
  std::vector<GridAxis> axes;
  for (const std::string& item : Split(spec, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("grid", "expected key=v1,v2 in '" + item + "'");
    }
    GridAxis axis{item.substr(0, eq), Split(item.substr(eq + 1), ',')};
    for (const auto& v : axis.values) {
      if (v.empty()) throw ConfigError("grid." + axis.key, "empty value");
    }
    if (axis.values.empty()) {
      throw ConfigError("grid." + axis.key, "no values");
    }
    for (const auto& other : axes) {
      if (other.key == axis.key) {
        throw ConfigError("grid." + axis.key, "axis given twice");
      }
    }
    // Reject unknown keys early with a throwaway document.
    json probe = json::object();
    Apply(probe, axis.key, axis.values.front());
    axes.push_back(std::move(axis));
  }
  if (axes.empty()) throw ConfigError("grid", "no axes given");
  return axes;
}

std::vector<SweepCell> ExpandGrid(const json& base,
                                  const std::vector<GridAxis>& axes) {
  std::vector<SweepCell> cells{{"", base}};
  for (const auto& axis : axes) {
    std::vector<SweepCell> next;
    for (const auto& cell : cells) {
      for (const auto& value : axis.values) {
        SweepCell c = cell;
        Apply(c.config, axis.key, value);
        if (!c.name.empty()) c.name += ',';
        c.name += axis.key + '=' + value;
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace fedq
