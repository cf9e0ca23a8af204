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

// Local Laplace mechanism for client updates.
//
// After local training a client estimates the Lipschitz smoothness lambda of
// its loss from a trace of (gradient, parameters) pairs, derives the L1
// sensitivity of its E epochs of clipped SGD, and perturbs every parameter
// with Laplace(0, T_i * sensitivity / epsilon) noise, T_i = P*T / (N*E).
//
// Sensitivity, with clip bound xi, step eta, n samples and E0 the smallest
// integer with (1 + lambda*eta)^E0 >= 1 + n:
//
//   lambda == 0          2 xi E eta / n
//   lambda > 0, E < E0   2 xi / (lambda n) * ((1 + lambda eta)^E - 1)
//   lambda > 0, E >= E0  2 xi + 2 eta xi (E - E0)

#ifndef FEDQ_PRIVACY_H_
#define FEDQ_PRIVACY_H_

#include <cstdint>
#include <vector>

#include "fedq/rng.h"
#include "fedq/tensor.h"

namespace fedq {

struct DpConfig {
  double epsilon = 1.0;
  double xi = 1.0;  // L1 gradient clipping bound
  // Local DP with delta = 0; there is no knob.
  static constexpr double kDelta = 0.0;

  friend bool operator==(const DpConfig&, const DpConfig&) = default;
};

struct SensitivityInputs {
  double lambda = 0.0;
  double eta = 0.1;
  int local_epochs = 1;
  std::int64_t n = 1;
  double xi = 1.0;
};

struct RoundScaling {
  int clients_per_round = 1;  // P
  int total_rounds = 1;       // T
  int num_clients = 1;        // N
  int local_epochs = 1;       // E

  double Factor() const;  // P*T / (N*E)
};

// Gradient and the parameters it was evaluated at, for one batch.
struct TraceEntry {
  ParamSet grad;
  ParamSet params;
};

// epochs[e][j] is batch j of local epoch e.
struct BatchTrace {
  std::vector<std::vector<TraceEntry>> epochs;
};

// max over (epoch e, batch j) -> (epoch e+1, batch j) pairs of
// ||g - g'||_1 / ||theta - theta'||_1. Pairs with identical parameters are
// skipped; with no usable pair the estimate is 0.
double LipschitzEstimate(const BatchTrace& trace);

// Smallest non-negative integer E0 with (1 + lambda*eta)^E0 >= 1 + n. When
// 1 + lambda*eta rounds to 1 the bound is unreachable and INT64_MAX is
// returned. Throws InputError unless lambda > 0, eta > 0 and n >= 0.
std::int64_t ComputeE0(double lambda, double eta, std::int64_t n);

// L1 sensitivity of a client's local update. Throws InputError on invalid
// inputs.
double Sensitivity(const SensitivityInputs& in);

// T_i * sensitivity / epsilon.
double NoiseScale(double sensitivity, const DpConfig& dp,
                  const RoundScaling& rs);

// Draws one Laplace(0, scale) variate by inverse CDF.
double SampleLaplace(double scale, Rng& rng);

// i.i.d. Laplace(0, scale) per element of `like`; zeros when scale == 0.
ParamSet LaplaceNoise(double scale, const ParamSet& like, Rng& rng);

// params + noise. Throws InputError when not conformable.
ParamSet Perturb(const ParamSet& params, const ParamSet& noise);

}  // namespace fedq

#endif  // FEDQ_PRIVACY_H_
