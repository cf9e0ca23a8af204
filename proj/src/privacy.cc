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

#include "fedq/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fedq/errors.h"

namespace fedq {

double RoundScaling::Factor() const {
  if (clients_per_round < 1 || total_rounds < 1 || num_clients < 1 ||
      local_epochs < 1 || clients_per_round > num_clients) {
    throw InputError("round scaling needs 1 <= P <= N, T >= 1, E >= 1");
  }
  return static_cast<double>(clients_per_round) *
         static_cast<double>(total_rounds) /
         (static_cast<double>(num_clients) * static_cast<double>(local_epochs));
}

double LipschitzEstimate(const BatchTrace& trace) {
  double best = 0.0;
  for (std::size_t e = 0; e + 1 < trace.epochs.size(); ++e) {
    const auto& cur = trace.epochs[e];
    const auto& next = trace.epochs[e + 1];
    const std::size_t batches = std::min(cur.size(), next.size());
    for (std::size_t j = 0; j < batches; ++j) {
      const double dtheta =
          L1Norm(Subtract(cur[j].params, next[j].params));
      if (dtheta == 0.0) continue;
      const double dgrad = L1Norm(Subtract(cur[j].grad, next[j].grad));
      best = std::max(best, dgrad / dtheta);
    }
  }
  return best;
}

std::int64_t ComputeE0(double lambda, double eta, std::int64_t n) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InputError("E0 is only defined for lambda > 0");
  }
  if (!(eta > 0.0)) throw InputError("E0: eta must be > 0");
  if (n < 0) throw InputError("E0: n must be >= 0");
  const double base = 1.0 + lambda * eta;
  const double target = 1.0 + static_cast<double>(n);
  if (base == 1.0) return std::numeric_limits<std::int64_t>::max();
  const auto reaches = [&](std::int64_t k) {
    return std::pow(base, static_cast<double>(k)) >= target;
  };
  // Start from the logarithmic estimate, then settle the boundary with the
  // same power comparison the definition uses.
  std::int64_t k = static_cast<std::int64_t>(
      std::ceil(std::log(target) / std::log(base)));
  k = std::max<std::int64_t>(k, 0);
  while (k > 0 && reaches(k - 1)) --k;
  while (!reaches(k)) ++k;
  return k;
}

double Sensitivity(const SensitivityInputs& in) {
  if (!(in.lambda >= 0.0) || !std::isfinite(in.lambda)) {
    throw InputError("sensitivity: lambda must be finite and >= 0");
  }
  if (!(in.eta > 0.0)) throw InputError("sensitivity: eta must be > 0");
  if (in.local_epochs < 1) throw InputError("sensitivity: E must be >= 1");
  if (in.n < 1) throw InputError("sensitivity: n must be >= 1");
  if (!(in.xi > 0.0)) throw InputError("sensitivity: xi must be > 0");

  const double e = static_cast<double>(in.local_epochs);
  const double n = static_cast<double>(in.n);
  if (in.lambda == 0.0) return 2.0 * in.xi * e * in.eta / n;

  const std::int64_t e0 = ComputeE0(in.lambda, in.eta, in.n);
  if (in.local_epochs < e0) {
    // (1 + lambda eta)^E - 1 without cancellation for small lambda.
    const double growth = std::expm1(e * std::log1p(in.lambda * in.eta));
    return 2.0 * in.xi / (in.lambda * n) * growth;
  }
  return 2.0 * in.xi +
         2.0 * in.eta * in.xi * static_cast<double>(in.local_epochs - e0);
}

double NoiseScale(double sensitivity, const DpConfig& dp,
                  const RoundScaling& rs) {
  if (!(dp.epsilon > 0.0)) throw InputError("noise_scale: epsilon must be > 0");
  if (!(sensitivity >= 0.0)) {
    throw InputError("noise_scale: sensitivity must be >= 0");
  }
  return rs.Factor() * sensitivity / dp.epsilon;
}

double SampleLaplace(double scale, Rng& rng) {
  double u;
  do {
    u = Uniform01(rng) - 0.5;  // [-0.5, 0.5)
  } while (u == -0.5);
  const double mag = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

ParamSet LaplaceNoise(double scale, const ParamSet& like, Rng& rng) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw InputError("laplace_noise: scale must be finite and >= 0");
  }
  ParamSet out = ZerosLike(like);
  if (scale == 0.0) return out;
  for (auto& e : out.mutable_entries()) {
    for (double& v : e.tensor.mutable_values()) v = SampleLaplace(scale, rng);
  }
  return out;
}

ParamSet Perturb(const ParamSet& params, const ParamSet& noise) {
  CheckConformable(params, noise, "perturb");
  return Add(params, noise);
}

}  // namespace fedq
