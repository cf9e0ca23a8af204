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

#include "fedq/metrics.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fedq/errors.h"
#include "json.hpp"

namespace fedq {
namespace {

using nlohmann::json;

std::string Fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::int64_t ToInt(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field, "expected an integer, got '" + s + "'");
  }
}

double ToReal(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(field, "expected a number, got '" + s + "'");
  }
}

std::optional<double> OptReal(const std::string& s, const std::string& field) {
  if (s.empty()) return std::nullopt;
  return ToReal(s, field);
}

json RecordToJson(const RoundRecord& r) {
  json j;
  j["t"] = r.t;
  j["downlink_bits"] = r.downlink_bits;
  j["uplink_bits"] = r.uplink_bits;
  j["mean_bits"] = r.mean_bits;
  j["test_acc"] = r.test_acc ? json(*r.test_acc) : json(nullptr);
  j["train_acc"] = r.train_acc ? json(*r.train_acc) : json(nullptr);
  j["selected"] = r.selected;
  return j;
}

template <typename T>
T Field(const json& j, const char* key, std::size_t line) {
  const std::string where = "line " + std::to_string(line) + "." + key;
  if (!j.contains(key)) throw ParseError(where, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where, "wrong type");
  }
}

std::optional<double> OptField(const json& j, const char* key,
                               std::size_t line) {
  if (!j.contains(key)) {
    throw ParseError("line " + std::to_string(line) + "." + key, "missing");
  }
  if (j.at(key).is_null()) return std::nullopt;
  return Field<double>(j, key, line);
}

}  // namespace

MetricsFormat ParseMetricsFormat(const std::string& s) {
  if (s == "csv") return MetricsFormat::kCsv;
  if (s == "jsonl") return MetricsFormat::kJsonl;
  throw InputError("unknown metrics format '" + s + "' (expected csv|jsonl)");
}

std::string ToString(MetricsFormat format) {
  return format == MetricsFormat::kCsv ? "csv" : "jsonl";
}

MetricsFormat FormatFromPath(const std::string& path) {
  auto ends_with = [&](const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) ==
               0;
  };
  if (ends_with(".csv")) return MetricsFormat::kCsv;
  if (ends_with(".jsonl")) return MetricsFormat::kJsonl;
  throw ParseError(path, "cannot infer metrics format (expected .csv/.jsonl)");
}

std::string FormatMetrics(const std::vector<RoundRecord>& records,
                          MetricsFormat format) {
  std::string out;
  if (format == MetricsFormat::kCsv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : records) {
      out += std::to_string(r.t) + ',' + std::to_string(r.downlink_bits) +
             ',' + std::to_string(r.uplink_bits) + ',' + Fixed6(r.mean_bits) +
             ',' + (r.test_acc ? Fixed6(*r.test_acc) : "") + ',' +
             (r.train_acc ? Fixed6(*r.train_acc) : "") + '\n';
    }
    return out;
  }
  for (const auto& r : records) {
    out += RecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

void ExportMetrics(const std::vector<RoundRecord>& records,
                   MetricsFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << FormatMetrics(records, format);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::vector<RoundRecord> ParseMetrics(const std::string& text,
                                      MetricsFormat format) {
  std::vector<RoundRecord> records;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  if (format == MetricsFormat::kCsv) {
    if (!std::getline(in, line) || line != kCsvHeader) {
      throw ParseError("header", std::string("expected '") + kCsvHeader + "'");
    }
    ++line_no;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = SplitCsv(line);
      const std::string where = "line " + std::to_string(line_no);
      if (cells.size() != 6) {
        throw ParseError(where, "expected 6 columns, got " +
                                    std::to_string(cells.size()));
      }
      RoundRecord r;
      r.t = static_cast<int>(ToInt(cells[0], where + ".t"));
      r.downlink_bits = ToInt(cells[1], where + ".downlink_bits");
      r.uplink_bits = ToInt(cells[2], where + ".uplink_bits");
      r.mean_bits = ToReal(cells[3], where + ".mean_bits");
      r.test_acc = OptReal(cells[4], where + ".test_acc");
      r.train_acc = OptReal(cells[5], where + ".train_acc");
      records.push_back(std::move(r));
    }
    return records;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no), e.what());
    }
    if (!j.is_object()) {
      throw ParseError("line " + std::to_string(line_no), "expected object");
    }
    RoundRecord r;
    r.t = Field<int>(j, "t", line_no);
    r.downlink_bits = Field<std::int64_t>(j, "downlink_bits", line_no);
    r.uplink_bits = Field<std::int64_t>(j, "uplink_bits", line_no);
    r.mean_bits = Field<double>(j, "mean_bits", line_no);
    r.test_acc = OptField(j, "test_acc", line_no);
    r.train_acc = OptField(j, "train_acc", line_no);
    if (j.contains("selected")) {
      r.selected = Field<std::vector<int>>(j, "selected", line_no);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RoundRecord> ReadMetrics(const std::string& path) {
  const MetricsFormat format = FormatFromPath(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open metrics file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseMetrics(ss.str(), format);
}

RunSummary Summarize(const std::vector<RoundRecord>& records) {
  RunSummary s;
  for (const auto& r : records) {
    s.downlink_bits += r.downlink_bits;
    s.uplink_bits += r.uplink_bits;
  }
  s.total_bits = s.downlink_bits + s.uplink_bits;
  if (const auto best = BestRecord(records)) {
    s.best_accuracy = records[*best].test_acc;
    s.best_round = records[*best].t;
  }
  return s;
}

Comparison CompareRuns(const std::vector<RoundRecord>& baseline,
                       const std::vector<RoundRecord>& variant) {
  Comparison c{Summarize(baseline), Summarize(variant), 0.0};
  if (c.baseline.total_bits <= 0) {
    throw InputError("compare: baseline run has no communicated bits");
  }
  c.reduction = 1.0 - static_cast<double>(c.variant.total_bits) /
                          static_cast<double>(c.baseline.total_bits);
  return c;
}

Comparison CompareRunFiles(const std::string& baseline_path,
                           const std::string& variant_path) {
  return CompareRuns(ReadMetrics(baseline_path), ReadMetrics(variant_path));
}

}  // namespace fedq
