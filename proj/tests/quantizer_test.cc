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

#include <cmath>
#include <limits>

#include "fedq/errors.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace fedq {
namespace {

using testing::RandomParams;
using testing::UniformIn;

DenseTensor RandomTensor(Rng& rng, std::size_t n, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = UniformIn(rng, -scale, scale);
  return DenseTensor({n}, std::move(v));
}

TEST(ScaleFactorTest, Examples) {
  EXPECT_EQ(ScaleFactor(1.0, 8), 127.0);
  EXPECT_EQ(ScaleFactor(0.0, 8), 1.0);
  EXPECT_EQ(ScaleFactor(0.5, 2), 2.0);
}

TEST(ScaleFactorTest, BitsOutOfRange) {
  EXPECT_THROW(ScaleFactor(1.0, 1), InputError);
  EXPECT_THROW(ScaleFactor(1.0, 33), InputError);
}

TEST(StochasticRoundTest, IntegersAreFixedPoints) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(StochasticRound(2.0, rng), 2);
  EXPECT_EQ(StochasticRound(-7.0, rng), -7);
}

TEST(StochasticRoundTest, MeanOfQuarterMatches) {
  Rng rng(2);
  constexpr int kDraws = 100000;
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto r = StochasticRound(2.25, rng);
    ASSERT_TRUE(r == 2 || r == 3);
    sum += static_cast<double>(r);
  }
  EXPECT_NEAR(sum / kDraws, 2.25, 0.01);
}

TEST(StochasticRoundTest, NegativeHalfSplitsEvenly) {
  Rng rng(3);
  constexpr int kDraws = 100000;
  int down = 0, up = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto r = StochasticRound(-1.5, rng);
    if (r == -2) ++down;
    else if (r == -1) ++up;
    else FAIL() << "unexpected " << r;
  }
  EXPECT_NEAR(static_cast<double>(down) / kDraws, 0.5, 0.02);
  EXPECT_NEAR(static_cast<double>(up) / kDraws, 0.5, 0.02);
}

TEST(StochasticRoundTest, RejectsNonFiniteAndHuge) {
  Rng rng(4);
  EXPECT_THROW(StochasticRound(std::numeric_limits<double>::quiet_NaN(), rng),
               InputError);
  EXPECT_THROW(StochasticRound(std::numeric_limits<double>::infinity(), rng),
               InputError);
  EXPECT_THROW(StochasticRound(0x1.0p62, rng), InputError);
}

TEST(ClipIntTest, Examples) {
  EXPECT_EQ(ClipInt(200, 8), 127);
  EXPECT_EQ(ClipInt(5, 8), 5);
  EXPECT_EQ(ClipInt(-300, 8), -127);
  EXPECT_EQ(ClipInt(std::int64_t{1} << 40, 32), 2147483647);
}

TEST(QuantizeTest, ZeroTensor) {
  Rng rng(5);
  const auto q = Quantize(DenseTensor({3, 2}), 8, rng);
  EXPECT_EQ(q.scale, 1.0);
  EXPECT_EQ(q.codes, std::vector<std::int64_t>(6, 0));
  EXPECT_EQ(q.shape, (Shape{3, 2}));
}

TEST(QuantizeTest, MaxElementMapsToMaxCode) {
  Rng rng(6);
  for (int b = kMinBits; b <= kMaxBits; ++b) {
    for (int i = 0; i < 50; ++i) {
      const double alpha = UniformIn(rng, 1e-3, 1e3);
      const auto q = Quantize(DenseTensor({1}, {alpha}), b, rng);
      EXPECT_EQ(q.codes[0], MaxCode(b)) << "b=" << b << " alpha=" << alpha;
      const auto neg = Quantize(DenseTensor({1}, {-alpha}), b, rng);
      EXPECT_EQ(neg.codes[0], -MaxCode(b));
    }
  }
}

TEST(QuantizeTest, RoundtripWithinOneStepAndCodesInRange) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int b = kMinBits + static_cast<int>(rng() % 31);
    const DenseTensor t =
        RandomTensor(rng, 1 + rng() % 50, UniformIn(rng, 1e-4, 1e4));
    const auto q = Quantize(t, b, rng);
    ASSERT_EQ(q.codes.size(), t.size());
    const DenseTensor back = Dequantize(q);
    for (std::size_t i = 0; i < t.size(); ++i) {
      EXPECT_LE(std::abs(q.codes[i]), MaxCode(b));
      EXPECT_LE(std::abs(back[i] - t[i]), (1.0 / q.scale) * (1.0 + 1e-12));
    }
  }
}

TEST(QuantizeTest, ThirtyTwoBitRoundtripErrorBound) {
  Rng rng(8);
  const DenseTensor t = RandomTensor(rng, 1000, 3.0);
  const auto q = Quantize(t, 32, rng);
  double alpha = 0.0;
  for (double v : t.values()) alpha = std::max(alpha, std::abs(v));
  const double bound = alpha / 2147483647.0;
  EXPECT_DOUBLE_EQ(1.0 / q.scale, bound);
  const DenseTensor back = Dequantize(q);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_LE(std::abs(back[i] - t[i]), bound * (1.0 + 1e-12));
  }
}

TEST(QuantizeTest, SameSeedSameCodes) {
  Rng data(9);
  const DenseTensor t = RandomTensor(data, 200, 1.0);
  Rng a(123), b(123);
  EXPECT_EQ(Quantize(t, 4, a), Quantize(t, 4, b));
}

TEST(QuantizeTest, UnbiasedOnAverage) {
  // Variance per trial <= (1/s)^2 / 4, so 4 standard errors is
  // 4 * (1/s) / sqrt(4 * trials).
  Rng rng(10);
  constexpr int kTrials = 20000;
  const DenseTensor t({3}, {0.8, -0.3337, 0.05});
  for (int b : {2, 4, 8}) {
    double sum = 0.0;
    double step = 0.0;
    for (int i = 0; i < kTrials; ++i) {
      const auto q = Quantize(t, b, rng);
      step = 1.0 / q.scale;
      sum += Dequantize(q)[1];
    }
    EXPECT_NEAR(sum / kTrials, -0.3337, 4.0 * step / std::sqrt(4.0 * kTrials))
        << "b=" << b;
  }
}

TEST(DequantizeTest, Examples) {
  EXPECT_EQ(Dequantize({{4}, {0, 0, 0, 0}, 8, 3.0}), DenseTensor({4}));
  EXPECT_EQ(Dequantize({{1}, {127}, 8, 127.0})[0], 1.0);
}

TEST(QuantizeParamsTest, OneScalePerTensorAndBound) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const ParamSet p = RandomParams(rng, UniformIn(rng, 0.1, 10));
    const int b = 2 + static_cast<int>(rng() % 31);
    const auto q = QuantizeParams(p, b, rng);
    ASSERT_EQ(q.size(), p.size());
    double bound = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      EXPECT_EQ(q.entries[i].name, p[i].name);
      bound = std::max(bound, 1.0 / q.entries[i].tensor.scale);
    }
    EXPECT_LE(MaxAbsDiff(DequantizeParams(q), p), bound * (1.0 + 1e-12));
  }
}

TEST(QuantizeParamsTest, EmptySet) {
  Rng rng(12);
  const auto q = QuantizeParams(ParamSet{}, 8, rng);
  EXPECT_EQ(q.size(), 0u);
  EXPECT_TRUE(DequantizeParams(q).empty());
}

TEST(QuantizeTest, NonFiniteTensorRejected) {
  Rng rng(13);
  EXPECT_THROW(
      Quantize(DenseTensor({1}, {std::numeric_limits<double>::infinity()}), 8,
               rng),
      InputError);
}

}  // namespace
}  // namespace fedq
