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

// Symmetric stochastic uniform quantization with one scale per tensor.
//
//   s     = (2^(b-1) - 1) / alpha,  alpha = max |x| over the tensor
//   code  = clip(rho(x * s), b)     rho = unbiased stochastic rounding
//   x'    = code / s
//
// Codes live in the symmetric range [-(2^(b-1) - 1), 2^(b-1) - 1]. An
// all-zero tensor gets scale 1 and all-zero codes.

#ifndef FEDQ_QUANTIZER_H_
#define FEDQ_QUANTIZER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "fedq/rng.h"
#include "fedq/tensor.h"

namespace fedq {

inline constexpr int kMinBits = 2;
inline constexpr int kMaxBits = 32;

// Largest code magnitude for a bit-length: 2^(b-1) - 1.
std::int64_t MaxCode(int bits);

struct QuantizedTensor {
  Shape shape;
  std::vector<std::int64_t> codes;
  int bits = kMaxBits;
  double scale = 1.0;

  friend bool operator==(const QuantizedTensor&,
                         const QuantizedTensor&) = default;
};

struct NamedQuantizedTensor {
  std::string name;
  QuantizedTensor tensor;

  friend bool operator==(const NamedQuantizedTensor&,
                         const NamedQuantizedTensor&) = default;
};

// Mirrors the names and order of the ParamSet it was produced from.
struct QuantizedParamSet {
  std::vector<NamedQuantizedTensor> entries;

  std::size_t size() const { return entries.size(); }

  friend bool operator==(const QuantizedParamSet&,
                         const QuantizedParamSet&) = default;
};

// (2^(b-1) - 1) / alpha, or 1 when alpha == 0. Throws InputError for bits
// outside [2, 32] or negative/non-finite alpha.
double ScaleFactor(double alpha, int bits);

// floor(x) with probability ceil(x) - x, otherwise ceil(x). Integers are
// returned unchanged without consuming randomness. Throws InputError for
// non-finite x or |x| >= 2^62.
std::int64_t StochasticRound(double x, Rng& rng);

// Clamp into [-(2^(b-1) - 1), 2^(b-1) - 1].
std::int64_t ClipInt(std::int64_t y, int bits);

QuantizedTensor Quantize(const DenseTensor& t, int bits, Rng& rng);
DenseTensor Dequantize(const QuantizedTensor& q);

QuantizedParamSet QuantizeParams(const ParamSet& p, int bits, Rng& rng);
ParamSet DequantizeParams(const QuantizedParamSet& q);

}  // namespace fedq

#endif  // FEDQ_QUANTIZER_H_
