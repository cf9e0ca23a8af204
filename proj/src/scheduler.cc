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

#include "fedq/scheduler.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fedq/errors.h"

namespace fedq {

std::string ToString(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kFloat32:
      return "fp32";
    case ScheduleMode::kStatic:
      return "static";
    case ScheduleMode::kCosine:
      return "cosine";
    case ScheduleMode::kDynamic:
      return "dynamic";
  }
  return "?";
}

ScheduleMode ParseScheduleMode(const std::string& s) {
  if (s == "fp32") return ScheduleMode::kFloat32;
  if (s == "static") return ScheduleMode::kStatic;
  if (s == "cosine") return ScheduleMode::kCosine;
  if (s == "dynamic") return ScheduleMode::kDynamic;
  throw InputError("unknown schedule mode '" + s +
                   "' (expected fp32|static|cosine|dynamic)");
}

void ScheduleConfig::Validate() const {
  if (total_rounds < 1) throw ConfigError("rounds", "must be >= 1");
  if (mode == ScheduleMode::kStatic &&
      (static_bits < 2 || static_bits > 32)) {
    throw ConfigError("schedule.bits", "must be in [2, 32]");
  }
  if (mode == ScheduleMode::kCosine || mode == ScheduleMode::kDynamic) {
    if (b_min < 2 || b_min > b_max || b_max > 32) {
      throw ConfigError("schedule.b_min/b_max",
                        "must satisfy 2 <= b_min <= b_max <= 32");
    }
  }
  if (!(lambda_h >= 0.0 && lambda_h <= 1.0)) {
    throw ConfigError("schedule.lambda_h", "must be in [0, 1]");
  }
}

double CosineBits(std::int64_t t, std::int64_t period, int b_max, int b_min,
                  double nu) {
  if (period < 1) throw InputError("cosine_bits: period must be >= 1");
  if (t < 0 || t > period) {
    throw InputError("cosine_bits: round " + std::to_string(t) +
                     " outside [0, " + std::to_string(period) + "]");
  }
  if (!(nu >= 0.0 && nu <= 1.0)) {
    throw InputError("cosine_bits: nu must be in [0, 1]");
  }
  const double phase = std::numbers::pi * static_cast<double>(t) /
                       static_cast<double>(period);
  const double b =
      b_min + nu * (b_max - b_min) * (1.0 + std::cos(phase)) / 2.0;
  return std::clamp(b, static_cast<double>(b_min), static_cast<double>(b_max));
}

int RoundBits(double b, int b_min, int b_max) {
  const double r = std::floor(b + 0.5);
  return static_cast<int>(
      std::clamp(r, static_cast<double>(b_min), static_cast<double>(b_max)));
}

double NormalizedEntropy(std::span<const std::int64_t> label_counts,
                         int num_classes) {
  if (num_classes < 2) throw InputError("entropy: K must be >= 2");
  if (label_counts.size() > static_cast<std::size_t>(num_classes)) {
    throw InputError("entropy: histogram has more than K classes");
  }
  std::int64_t total = 0;
  for (std::int64_t c : label_counts) {
    if (c < 0) throw InputError("entropy: negative class count");
    total += c;
  }
  if (total == 0) throw InputError("entropy: empty histogram");
  double h = 0.0;
  for (std::int64_t c : label_counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return std::clamp(h / std::log2(static_cast<double>(num_classes)), 0.0, 1.0);
}

double ClientImportance(const ImportanceInputs& in, double lambda_h) {
  if (!(lambda_h >= 0.0 && lambda_h <= 1.0)) {
    throw InputError("client_importance: lambda_h must be in [0, 1]");
  }
  std::int64_t total = 0;
  for (std::int64_t c : in.label_counts) total += c;
  if (total != in.dataset_size) {
    throw InputError("client_importance: label counts do not sum to n_i");
  }
  if (in.dataset_size < 1 || in.dataset_size > in.n_max) {
    throw InputError("client_importance: need 1 <= n_i <= n_max");
  }
  const double entropy = NormalizedEntropy(in.label_counts, in.num_classes);
  const double size = static_cast<double>(in.dataset_size) /
                      static_cast<double>(in.n_max);
  return std::clamp(lambda_h * entropy + (1.0 - lambda_h) * size, 0.0, 1.0);
}

std::int64_t CosinePeriod(int total_rounds) {
  return std::max<std::int64_t>(1, total_rounds - 1);
}

namespace {

int AnnealedBits(const ScheduleConfig& cfg, std::int64_t t, double nu) {
  if (t < 0 || t >= cfg.total_rounds) {
    throw InputError("schedule: round " + std::to_string(t) + " outside [0, " +
                     std::to_string(cfg.total_rounds - 1) + "]");
  }
  return RoundBits(CosineBits(t, CosinePeriod(cfg.total_rounds), cfg.b_max,
                              cfg.b_min, nu),
                   cfg.b_min, cfg.b_max);
}

}  // namespace

int ScheduleBits(const ScheduleConfig& cfg, std::int64_t t,
                 const std::optional<ImportanceInputs>& importance) {
  switch (cfg.mode) {
    case ScheduleMode::kFloat32:
      throw InputError("schedule: fp32 mode has no bit-length");
    case ScheduleMode::kStatic:
      return cfg.static_bits;
    case ScheduleMode::kCosine:
      return AnnealedBits(cfg, t, 1.0);
    case ScheduleMode::kDynamic:
      if (!importance) {
        throw InputError("schedule: dynamic mode requires importance inputs");
      }
      return AnnealedBits(cfg, t, ClientImportance(*importance, cfg.lambda_h));
  }
  throw InputError("schedule: bad mode");
}

int ServerBits(const ScheduleConfig& cfg, std::int64_t t) {
  switch (cfg.mode) {
    case ScheduleMode::kFloat32:
      throw InputError("schedule: fp32 mode has no bit-length");
    case ScheduleMode::kStatic:
      return cfg.static_bits;
    case ScheduleMode::kCosine:
    case ScheduleMode::kDynamic:
      return AnnealedBits(cfg, t, 1.0);
  }
  throw InputError("schedule: bad mode");
}

}  // namespace fedq
