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

// Bit-length schedules.
//
// The cosine schedule anneals from b_max at round 0 to b_min at the final
// round T-1:
//
//   b(t) = b_min + nu * (b_max - b_min) * (1 + cos(pi * t / (T - 1))) / 2
//
// The server always uses nu = 1. In dynamic mode each client scales the
// amplitude by its importance
//
//   nu_i = lambda_h * H(p_i) / log2(K) + (1 - lambda_h) * n_i / n_max
//
// where H is the Shannon entropy of the client's label distribution and n_max
// is the largest dataset among the clients selected in the round.

#ifndef FEDQ_SCHEDULER_H_
#define FEDQ_SCHEDULER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fedq {

enum class ScheduleMode {
  kFloat32,  // no quantization; parameters travel as raw float32
  kStatic,
  kCosine,
  kDynamic,
};

std::string ToString(ScheduleMode mode);
ScheduleMode ParseScheduleMode(const std::string& s);

struct ScheduleConfig {
  ScheduleMode mode = ScheduleMode::kFloat32;
  int static_bits = 32;  // kStatic only
  int b_max = 32;
  int b_min = 8;
  int total_rounds = 1;
  double lambda_h = 0.5;  // kDynamic only

  // Requires 2 <= b_min <= b_max <= 32, total_rounds >= 1,
  // lambda_h in [0, 1] and static_bits in [2, 32]. Throws ConfigError
  // naming the first violated key.
  void Validate() const;

  friend bool operator==(const ScheduleConfig&,
                         const ScheduleConfig&) = default;
};

struct ImportanceInputs {
  std::vector<std::int64_t> label_counts;
  std::int64_t dataset_size = 0;
  std::int64_t n_max = 0;
  int num_classes = 2;
};

// Real-valued cosine bit-length with annealing period `period`. Throws
// InputError unless 0 <= t <= period and nu in [0, 1].
double CosineBits(std::int64_t t, std::int64_t period, int b_max, int b_min,
                  double nu);

// Nearest integer with halves rounded up, clamped to [b_min, b_max].
int RoundBits(double b, int b_min, int b_max);

// -sum p log2 p / log2 K over the nonzero classes. Throws InputError when K <
// 2, a count is negative or all counts are zero.
double NormalizedEntropy(std::span<const std::int64_t> label_counts,
                         int num_classes);

// Throws InputError when the ImportanceInputs invariants do not hold.
double ClientImportance(const ImportanceInputs& inputs, double lambda_h);

// A client's integer bit-length for round t. static -> b; cosine -> nu = 1;
// dynamic -> nu from `importance`. Throws InputError for dynamic without
// importance inputs, for kFloat32 (nothing to schedule) and for t outside
// [0, T-1].
int ScheduleBits(const ScheduleConfig& cfg, std::int64_t t,
                 const std::optional<ImportanceInputs>& importance);

// The server's downlink bit-length: static b, otherwise the nu = 1 cosine
// curve (dynamic schedules only adapt the uplink).
int ServerBits(const ScheduleConfig& cfg, std::int64_t t);

// Annealing period used for a run of T rounds: T - 1, or 1 when T == 1.
std::int64_t CosinePeriod(int total_rounds);

}  // namespace fedq

#endif  // FEDQ_SCHEDULER_H_
