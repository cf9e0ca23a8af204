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

// Per-round metrics files.
//
// CSV: header "t,downlink_bits,uplink_bits,mean_bits,test_acc,train_acc",
// integer bit counts, reals with six decimals, empty cells for rounds that
// were not evaluated.
//
// JSONL: one object per round with the same keys plus "selected"; reals are
// written at full precision (null when not evaluated) so records round-trip
// exactly.

#ifndef FEDQ_METRICS_H_
#define FEDQ_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fedq/federation.h"

namespace fedq {

enum class MetricsFormat { kCsv, kJsonl };

MetricsFormat ParseMetricsFormat(const std::string& s);
std::string ToString(MetricsFormat format);
// By extension: ".csv" or ".jsonl".
MetricsFormat FormatFromPath(const std::string& path);

inline constexpr const char* kCsvHeader =
    "t,downlink_bits,uplink_bits,mean_bits,test_acc,train_acc";

std::string FormatMetrics(const std::vector<RoundRecord>& records,
                          MetricsFormat format);
// Throws IoError naming the path on failure.
void ExportMetrics(const std::vector<RoundRecord>& records,
                   MetricsFormat format, const std::string& path);

// Inverse of FormatMetrics. Throws ParseError on a schema mismatch.
std::vector<RoundRecord> ParseMetrics(const std::string& text,
                                      MetricsFormat format);
std::vector<RoundRecord> ReadMetrics(const std::string& path);

struct RunSummary {
  std::int64_t total_bits = 0;
  std::int64_t downlink_bits = 0;
  std::int64_t uplink_bits = 0;
  std::optional<double> best_accuracy;
  std::optional<int> best_round;  // t of the best evaluated round
};

struct Comparison {
  RunSummary baseline;
  RunSummary variant;
  // 1 - variant_total / baseline_total.
  double reduction = 0.0;
};

RunSummary Summarize(const std::vector<RoundRecord>& records);
Comparison CompareRuns(const std::vector<RoundRecord>& baseline,
                       const std::vector<RoundRecord>& variant);
Comparison CompareRunFiles(const std::string& baseline_path,
                           const std::string& variant_path);

}  // namespace fedq

#endif  // FEDQ_METRICS_H_
