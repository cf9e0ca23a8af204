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

#include "fedq/quantizer.h"

#include <algorithm>
#include <cmath>

#include "fedq/errors.h"

namespace fedq {
namespace {

void CheckBits(int bits) {
  if (bits < kMinBits || bits > kMaxBits) {
    throw InputError("bit-length " + std::to_string(bits) +
                     " outside [2, 32]");
  }
}

constexpr double kRoundLimit = 0x1.0p62;

}  // namespace

std::int64_t MaxCode(int bits) {
  CheckBits(bits);
  return (std::int64_t{1} << (bits - 1)) - 1;
}

double ScaleFactor(double alpha, int bits) {
  CheckBits(bits);
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InputError("quantization range alpha must be finite and >= 0");
  }
  if (alpha == 0.0) return 1.0;
  return static_cast<double>(MaxCode(bits)) / alpha;
}

std::int64_t StochasticRound(double x, Rng& rng) {
  if (!std::isfinite(x)) throw InputError("stochastic_round: non-finite input");
  if (std::abs(x) >= kRoundLimit) {
    throw InputError("stochastic_round: |x| >= 2^62");
  }
  const double lo = std::floor(x);
  const double frac = x - lo;  // exact for |x| < 2^52, 0 above
  if (frac == 0.0) return static_cast<std::int64_t>(lo);
  // P(ceil) = x - floor(x).
  return static_cast<std::int64_t>(lo) + (Uniform01(rng) < frac ? 1 : 0);
}

std::int64_t ClipInt(std::int64_t y, int bits) {
  const std::int64_t hi = MaxCode(bits);
  return std::clamp(y, -hi, hi);
}

QuantizedTensor Quantize(const DenseTensor& t, int bits, Rng& rng) {
  CheckBits(bits);
  if (!t.AllFinite()) throw InputError("quantize: tensor has non-finite values");
  double alpha = 0.0;
  for (double v : t.values()) alpha = std::max(alpha, std::abs(v));
  const double s = ScaleFactor(alpha, bits);
  const std::int64_t qmax = MaxCode(bits);

  QuantizedTensor q{t.shape(), {}, bits, s};
  q.codes.reserve(t.size());
  for (double v : t.values()) {
    std::int64_t code;
    if (alpha > 0.0 && std::abs(v) == alpha) {
      // alpha * s is exactly qmax; floating point may land one ulp off.
      code = v > 0.0 ? qmax : -qmax;
    } else {
      code = StochasticRound(v * s, rng);
    }
    q.codes.push_back(ClipInt(code, bits));
  }
  return q;
}

DenseTensor Dequantize(const QuantizedTensor& q) {
  if (!(q.scale > 0.0)) throw InputError("dequantize: scale must be > 0");
  std::vector<double> v(q.codes.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(q.codes[i]) / q.scale;
  }
  return DenseTensor(q.shape, std::move(v));
}

QuantizedParamSet QuantizeParams(const ParamSet& p, int bits, Rng& rng) {
  QuantizedParamSet out;
  out.entries.reserve(p.size());
  for (const auto& e : p.entries()) {
    out.entries.push_back({e.name, Quantize(e.tensor, bits, rng)});
  }
  return out;
}

ParamSet DequantizeParams(const QuantizedParamSet& q) {
  ParamSet out;
  for (const auto& e : q.entries) out.Add(e.name, Dequantize(e.tensor));
  return out;
}

}  // namespace fedq
