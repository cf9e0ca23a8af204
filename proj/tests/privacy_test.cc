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

#include <cmath>

#include "fedq/errors.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace fedq {
namespace {

using testing::BruteForceE0;
using testing::OracleSensitivity;
using testing::RandomParams;
using testing::UniformIn;
using testing::Vec;

BatchTrace QuadraticTrace(Rng& rng, double c, int epochs, int batches) {
  // f(theta) = c/2 ||theta||^2, so grad = c * theta.
  BatchTrace trace;
  for (int e = 0; e < epochs; ++e) {
    std::vector<TraceEntry> row;
    for (int j = 0; j < batches; ++j) {
      ParamSet theta = Vec({UniformIn(rng, -1, 1), UniformIn(rng, -1, 1)});
      row.push_back({Scale(theta, c), theta});
    }
    trace.epochs.push_back(std::move(row));
  }
  return trace;
}

TEST(LipschitzEstimateTest, IdenticalGradientsGiveZero) {
  BatchTrace trace;
  trace.epochs = {{{Vec({1, 2}), Vec({0, 0})}}, {{Vec({1, 2}), Vec({3, 1})}}};
  EXPECT_EQ(LipschitzEstimate(trace), 0.0);
}

TEST(LipschitzEstimateTest, QuadraticGivesCurvature) {
  Rng rng(1);
  EXPECT_NEAR(LipschitzEstimate(QuadraticTrace(rng, 1.0, 4, 3)), 1.0, 1e-12);
  Rng again(1);
  EXPECT_NEAR(LipschitzEstimate(QuadraticTrace(again, 3.5, 4, 3)), 3.5,
              1e-12);
}

TEST(LipschitzEstimateTest, NoUsablePairGivesZero) {
  BatchTrace one_epoch;
  one_epoch.epochs = {{{Vec({1}), Vec({1})}}};
  EXPECT_EQ(LipschitzEstimate(one_epoch), 0.0);
  BatchTrace frozen;
  frozen.epochs = {{{Vec({1}), Vec({2})}}, {{Vec({5}), Vec({2})}}};
  EXPECT_EQ(LipschitzEstimate(frozen), 0.0);
}

TEST(LipschitzEstimateTest, TakesMaximumOverPairs) {
  BatchTrace trace;
  const TraceEntry origin{Vec({0}), Vec({0})};
  trace.epochs.push_back({origin, origin});
  trace.epochs.push_back({{Vec({2}), Vec({1})}, {Vec({5}), Vec({1})}});
  EXPECT_EQ(LipschitzEstimate(trace), 5.0);
}

TEST(ComputeE0Test, Examples) {
  EXPECT_EQ(ComputeE0(1.0, 1.0, 3), 2);
  EXPECT_EQ(ComputeE0(1.0, 1.0, 4), 3);
  EXPECT_EQ(ComputeE0(0.7, 0.2, 0), 0);
}

TEST(ComputeE0Test, RejectsNonPositiveLambda) {
  EXPECT_THROW(ComputeE0(0.0, 0.1, 5), InputError);
  EXPECT_THROW(ComputeE0(-1.0, 0.1, 5), InputError);
}

TEST(ComputeE0Test, UnreachableWhenBaseRoundsToOne) {
  EXPECT_EQ(ComputeE0(1e-300, 0.1, 5),
            std::numeric_limits<std::int64_t>::max());
}

TEST(ComputeE0Test, MatchesBruteForce) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double lambda = UniformIn(rng, 0.01, 10.0);
    const double eta = UniformIn(rng, 0.01, 0.5);
    const auto n = static_cast<std::int64_t>(rng() % 10001);
    const std::int64_t e0 = ComputeE0(lambda, eta, n);
    EXPECT_EQ(e0, BruteForceE0(lambda, eta, n))
        << lambda << " " << eta << " " << n;
    const double base = 1.0 + lambda * eta;
    EXPECT_GE(std::pow(base, static_cast<double>(e0)), 1.0 + n);
    if (e0 >= 1) EXPECT_LT(std::pow(base, static_cast<double>(e0 - 1)), 1.0 + n);
  }
}

TEST(SensitivityTest, Examples) {
  EXPECT_DOUBLE_EQ(Sensitivity({0.0, 0.1, 5, 100, 100.0}), 1.0);
  EXPECT_NEAR(Sensitivity({1.0, 0.1, 2, 1000, 1.0}), 0.00042, 1e-15);
  // lambda*eta = 1, n = 3: E0 = 2.
  EXPECT_EQ(Sensitivity({10.0, 0.1, 2, 3, 7.0}), 14.0);
  EXPECT_EQ(Sensitivity({10.0, 0.1, 5, 3, 7.0}), 14.0 + 2 * 0.1 * 7.0 * 3);
}

TEST(SensitivityTest, MatchesOracle) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double lambda = i % 5 == 0 ? 0.0 : UniformIn(rng, 0.001, 20.0);
    const double eta = UniformIn(rng, 0.01, 0.5);
    const int e = 1 + static_cast<int>(rng() % 20);
    const auto n = 1 + static_cast<std::int64_t>(rng() % 2000);
    const double xi = UniformIn(rng, 0.1, 200.0);
    const double want = OracleSensitivity(lambda, eta, e, n, xi);
    EXPECT_NEAR(Sensitivity({lambda, eta, e, n, xi}), want, 1e-10 * want);
  }
}

TEST(SensitivityTest, ContinuousAtZeroLambda) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const double eta = UniformIn(rng, 0.01, 0.5);
    const int e = 1 + static_cast<int>(rng() % 10);
    const auto n = 1 + static_cast<std::int64_t>(rng() % 500);
    const double at_zero = Sensitivity({0.0, eta, e, n, 1.0});
    const double near_zero = Sensitivity({1e-9, eta, e, n, 1.0});
    EXPECT_LE(std::abs(near_zero - at_zero) / at_zero, 1e-6);
  }
}

TEST(SensitivityTest, ZeroLambdaBranchMonotone) {
  const SensitivityInputs base{0.0, 0.1, 3, 50, 2.0};
  const double s = Sensitivity(base);
  auto more_n = base;
  more_n.n = 51;
  EXPECT_LT(Sensitivity(more_n), s);
  auto more_xi = base;
  more_xi.xi = 2.5;
  EXPECT_GT(Sensitivity(more_xi), s);
  auto more_e = base;
  more_e.local_epochs = 4;
  EXPECT_GT(Sensitivity(more_e), s);
  auto more_eta = base;
  more_eta.eta = 0.11;
  EXPECT_GT(Sensitivity(more_eta), s);
}

TEST(SensitivityTest, InvalidInputs) {
  EXPECT_THROW(Sensitivity({-1.0, 0.1, 1, 1, 1.0}), InputError);
  EXPECT_THROW(Sensitivity({0.0, 0.1, 0, 1, 1.0}), InputError);
  EXPECT_THROW(Sensitivity({0.0, 0.1, 1, 0, 1.0}), InputError);
}

TEST(NoiseScaleTest, Examples) {
  const RoundScaling rs{10, 100, 100, 5};
  EXPECT_EQ(rs.Factor(), 2.0);
  EXPECT_DOUBLE_EQ(NoiseScale(1.0, {1e4, 1.0}, rs), 2e-4);
  const RoundScaling doubled{10, 200, 100, 5};
  EXPECT_DOUBLE_EQ(NoiseScale(1.0, {1e4, 1.0}, doubled), 4e-4);
  EXPECT_THROW(NoiseScale(1.0, {0.0, 1.0}, rs), InputError);
}

TEST(LaplaceNoiseTest, ZeroScaleGivesZeros) {
  Rng rng(5);
  const ParamSet like = Vec({1, 2, 3});
  EXPECT_EQ(LaplaceNoise(0.0, like, rng), ZerosLike(like));
}

TEST(LaplaceNoiseTest, MomentsMatch) {
  Rng rng(6);
  constexpr int kDraws = 1000000;
  const double scale = 0.7;
  double sum = 0.0, abs_sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double x = SampleLaplace(scale, rng);
    sum += x;
    abs_sum += std::abs(x);
  }
  EXPECT_LT(std::abs(sum / kDraws), 4.0 * scale * std::sqrt(2.0) / 1000.0);
  EXPECT_NEAR(abs_sum / kDraws, scale, 0.02 * scale);
}

TEST(LaplaceNoiseTest, SameSeedSameNoise) {
  const ParamSet like = Vec(std::vector<double>(50, 0.0));
  Rng a(9), b(9);
  EXPECT_EQ(LaplaceNoise(1.5, like, a), LaplaceNoise(1.5, like, b));
}

TEST(PerturbTest, Identities) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const ParamSet p = RandomParams(rng);
    const ParamSet w = LaplaceNoise(0.3, p, rng);
    EXPECT_EQ(Perturb(p, ZerosLike(p)), p);
    EXPECT_LE(MaxAbsDiff(Perturb(Perturb(p, w), Scale(w, -1.0)), p), 1e-15);
    EXPECT_NEAR(L1Norm(Subtract(Perturb(p, w), p)), L1Norm(w),
                1e-12 * (1 + L1Norm(w)));
  }
}

TEST(PerturbTest, ShapeMismatchIsInputError) {
  EXPECT_THROW(Perturb(Vec({1, 2}), Vec({1})), InputError);
}

}  // namespace
}  // namespace fedq
