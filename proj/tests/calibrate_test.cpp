/*
 * Copyright 2026 The confgen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "confgen/calibrate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "confgen/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace confgen {
namespace {

using testing::L;
using testing::MakeAdm;
using testing::Step;

GenerationRecord Single(double score, double adm, Direction dir) {
  GenerationRecord r;
  r.scores = {{score}, dir};
  r.adms.values = {adm};
  return r;
}

std::vector<GenerationRecord> TwoRecords() {
  return {Single(0.5, 1.0, Direction::kDown), Single(0.7, 1.0, Direction::kDown)};
}

TEST(CalibrateTest, TwoRecordExample) {
  const auto recs = TwoRecords();
  const auto sel = MakeSelection(SelectorKind::kBelowLambda);
  const auto res = Calibrate(recs, sel, MakeAdm(AggKind::kMax), 0.6);
  EXPECT_EQ(res.lambda_hat, L(0.7));
  EXPECT_DOUBLE_EQ(res.threshold, 0.9);
  EXPECT_EQ(res.threshold, 3 * 0.6 / 2);
  EXPECT_EQ(res.achieved, 1.0);
  EXPECT_EQ(res.n, 2u);
  ASSERT_EQ(res.trace.size(), 4u);
  EXPECT_EQ(res.trace[0].lambda, ExtendedLambda::NegInf());
  EXPECT_EQ(res.trace[1].mean_admissibility, 0.5);
  EXPECT_EQ(res.trace[3].lambda, ExtendedLambda::PosInf());
}

TEST(CalibrateTest, GammaZeroIsNegInf) {
  const auto res = Calibrate(TwoRecords(),
                             MakeSelection(SelectorKind::kBelowLambda),
                             MakeAdm(AggKind::kMax), 0.0);
  EXPECT_EQ(res.lambda_hat, ExtendedLambda::NegInf());
}

TEST(CalibrateTest, UnattainableFallsBackToAbstain) {
  const auto res = Calibrate(TwoRecords(),
                             MakeSelection(SelectorKind::kBelowLambda),
                             MakeAdm(AggKind::kMax), 0.7);
  EXPECT_EQ(res.lambda_hat, ExtendedLambda::PosInf());
  EXPECT_EQ(res.achieved, 1.0);
  EXPECT_FALSE(res.warnings.empty());
}

TEST(CalibrateTest, GammaAboveMaxWarns) {
  const auto res = Calibrate(TwoRecords(),
                             MakeSelection(SelectorKind::kBelowLambda),
                             MakeAdm(AggKind::kMax), 1.5);
  EXPECT_EQ(res.lambda_hat, ExtendedLambda::PosInf());
  EXPECT_GE(res.warnings.size(), 1u);
}

TEST(CalibrateTest, IncompatiblePairWarns) {
  auto recs = TwoRecords();
  for (auto& r : recs) r.scores.direction = Direction::kUp;
  const auto res = Calibrate(recs, MakeSelection(SelectorKind::kAboveLambda),
                             MakeAdm(AggKind::kMax), 0.1);
  EXPECT_FALSE(res.warnings.empty());
}

TEST(CalibrateTest, Errors) {
  const std::vector<GenerationRecord> none;
  try {
    Calibrate(none, MakeSelection(SelectorKind::kBelowLambda),
              MakeAdm(AggKind::kMax), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCalibrationSet);
  }
  EXPECT_THROW(Calibrate(TwoRecords(), MakeSelection(SelectorKind::kRunningMax),
                         MakeAdm(AggKind::kMax), 0.5),
               Error);
  EXPECT_THROW(Calibrate(TwoRecords(),
                         MakeSelection(SelectorKind::kBelowLambda),
                         MakeAdm(AggKind::kMax), -0.1),
               Error);
  auto bad = TwoRecords();
  bad[0].adms.values.push_back(1.0);
  EXPECT_THROW(Calibrate(bad, MakeSelection(SelectorKind::kBelowLambda),
                         MakeAdm(AggKind::kMax), 0.5),
               Error);
}

TEST(CalibrateTest, ShiftedScaleReportsOriginalValues) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kMax);
  adm.a_min = -1.0;
  std::vector<GenerationRecord> recs{Single(0.5, 1.0, Direction::kDown),
                                     Single(0.7, 1.0, Direction::kDown)};
  const auto res =
      Calibrate(recs, MakeSelection(SelectorKind::kBelowLambda), adm, 0.0);
  // Shifted threshold 1.5 of range 2: reached only once both are selected.
  EXPECT_EQ(res.lambda_hat, L(0.7));
  EXPECT_EQ(res.achieved, 1.0);
  EXPECT_EQ(res.threshold, 3 * (0.0 + 1.0) / 2 - 1.0);
}

TEST(CpQuantileTest, Examples) {
  EXPECT_EQ(CpQuantile(std::vector<double>{0.1, 0.4, 0.2, 0.3}, 0.5), L(0.3));
  EXPECT_EQ(CpQuantile(std::vector<double>{0.1, 0.4, 0.2, 0.3}, 1.0),
            ExtendedLambda::PosInf());
  EXPECT_EQ(CpQuantile(std::vector<double>{7}, 0.5), L(7));
  EXPECT_THROW(CpQuantile(std::vector<double>{7}, 0.0), Error);
  EXPECT_THROW(CpQuantile(std::vector<double>{7}, 1.1), Error);
  EXPECT_THROW(CpQuantile(std::vector<double>{}, 0.5), Error);
}

TEST(CrcCalibrateTest, Examples) {
  EXPECT_EQ(CrcCalibrate(std::vector<StepFunction>{Step({2.0}, {0, 1}, 1)},
                         0.5, 10.0),
            L(2.0));
  EXPECT_EQ(CrcCalibrate(std::vector<StepFunction>{StepFunction::Constant(0),
                                                   StepFunction::Constant(0)},
                         0.5, 10.0),
            L(10.0));
  EXPECT_EQ(CrcCalibrate(std::vector<StepFunction>{StepFunction::Constant(1)},
                         0.5, 10.0),
            ExtendedLambda::NegInf());
  // Qualifying only beyond the cap returns the cap.
  EXPECT_EQ(CrcCalibrate(std::vector<StepFunction>{Step({20.0}, {0, 1}, 1)},
                         0.5, 10.0),
            L(10.0));
}

TEST(CrcCalibrateTest, MatchesCalibrateBelowCap) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GenerationRecord> recs;
    const int n = 1 + trial % 10;
    for (int i = 0; i < n; ++i) {
      recs.push_back(Single(u(rng), 1.0, Direction::kDown));
    }
    const auto sel = MakeSelection(SelectorKind::kBelowLambda);
    const auto adm = MakeAdm(AggKind::kMax);
    const double gamma = (1 + trial % 19) / 20.0;
    const auto profiles = RecordProfiles(recs, sel, adm);
    const auto crc = CrcCalibrate(profiles, gamma, 5.0);
    const auto cg = Calibrate(recs, sel, adm, gamma).lambda_hat;
    if (cg <= L(5.0)) EXPECT_EQ(crc, cg);
    else EXPECT_EQ(crc, L(5.0));
  }
}

TEST(UpperBoundDiagTest, WorkedExample) {
  // Two profiles averaging to [0, 0.6, 1] on breakpoints [1, 2].
  const std::vector<StepFunction> profiles{Step({1, 2}, {0, 0.6, 1}, 1),
                                           Step({1, 2}, {0, 0.6, 1}, 1)};
  const auto d = UpperBoundDiagFromProfiles(profiles, MakeAdm(AggKind::kMax),
                                            0.5);
  EXPECT_EQ(d.lambda_star, L(1.0));
  EXPECT_EQ(d.lambda_star_star, L(2.0));
  EXPECT_DOUBLE_EQ(d.h, 0.4);
  EXPECT_DOUBLE_EQ(d.upper_bound, 1.4);
  EXPECT_EQ(d.monotone_fraction, 1.0);
  EXPECT_EQ(d.n_plus_one, 2u);
}

TEST(UpperBoundDiagTest, ConstantProfileHasFullJump) {
  const std::vector<StepFunction> profiles{StepFunction::Constant(1),
                                           StepFunction::Constant(1)};
  const auto d = UpperBoundDiagFromProfiles(profiles, MakeAdm(AggKind::kMax),
                                            0.4);
  EXPECT_EQ(d.lambda_star_star, ExtendedLambda::NegInf());
  EXPECT_EQ(d.h, 1.0);
}

TEST(UpperBoundDiagTest, RecordsAndErrors) {
  const auto d = UpperBoundDiag(TwoRecords(),
                                MakeSelection(SelectorKind::kBelowLambda),
                                MakeAdm(AggKind::kMax), 0.25);
  EXPECT_EQ(d.lambda_star_star, L(0.7));
  EXPECT_DOUBLE_EQ(d.h, 0.5);
  EXPECT_GE(d.upper_bound, 0.25);
  std::vector<GenerationRecord> one{Single(0.5, 1.0, Direction::kDown)};
  EXPECT_THROW(UpperBoundDiag(one, MakeSelection(SelectorKind::kBelowLambda),
                              MakeAdm(AggKind::kMax), 0.5),
               Error);
}

TEST(UpperBoundDiagTest, NonMonotoneProfilesLowerTheFraction) {
  const std::vector<StepFunction> profiles{Step({1}, {1, 0}, 1),
                                           Step({1}, {0, 1}, 1)};
  const auto d = UpperBoundDiagFromProfiles(profiles, MakeAdm(AggKind::kMax),
                                            0.2);
  EXPECT_EQ(d.monotone_fraction, 0.5);
  EXPECT_GE(d.h, 0.0);
  EXPECT_EQ(d.coincident_breakpoints, 2u);
}

TEST(CalibratePropertyTest, OracleEquivalence) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> gam(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto kind = testing::kAllSelectors[trial % 6];
    const auto aggs = testing::CompatibleAggs(kind);
    const auto agg = aggs[(trial / 6) % aggs.size()];
    const bool binary = agg != AggKind::kMax && agg != AggKind::kMin;
    std::vector<GenerationRecord> recs;
    const std::size_t n = 1 + trial % 20;
    for (std::size_t i = 0; i < n; ++i) {
      recs.push_back(testing::RandomRecord(kind, 1 + (trial + i) % 8,
                                           trial % 3 == 0,
                                           binary || trial % 2 == 0, rng));
    }
    const auto sel = MakeSelection(kind);
    const auto adm = MakeAdm(agg, 0.5, 2);
    const double gamma = gam(rng);
    const auto res = Calibrate(recs, sel, adm, gamma);
    ASSERT_EQ(res.lambda_hat, oracle::BruteForceLambdaHat(recs, sel, adm, gamma))
        << SelectorName(kind) << " " << AggName(agg) << " gamma=" << gamma;
    if (!res.lambda_hat.is_pos_inf()) EXPECT_GE(res.achieved, res.threshold);
  }
}

TEST(CalibratePropertyTest, CpRecovery) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = trial % 3 == 0 ? 5 : (trial % 3 == 1 ? 20 : 100);
    std::vector<double> scores(n);
    std::vector<GenerationRecord> recs;
    for (auto& s : scores) {
      s = z(rng);
      recs.push_back(Single(s, 1.0, Direction::kDown));
    }
    const auto sel = MakeSelection(SelectorKind::kBelowLambda);
    const auto profiles = RecordProfiles(recs, sel, MakeAdm(AggKind::kMax));
    const auto mean = Mean(profiles);
    for (double g : DefaultGammaGrid()) {
      const auto res = CalibrateFromMean(mean, n, MakeAdm(AggKind::kMax), g);
      ASSERT_EQ(res.lambda_hat, CpQuantile(scores, g)) << "gamma=" << g;
    }
  }
}

TEST(CalibratePropertyTest, MonotoneInGamma) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto kind = testing::kAllSelectors[trial % 6];
    if (kind == SelectorKind::kRunningMaxSingle) continue;
    const auto agg = testing::CompatibleAggs(kind).front();
    std::vector<GenerationRecord> recs;
    for (int i = 0; i < 15; ++i) {
      recs.push_back(testing::RandomRecord(kind, 6, false, true, rng));
    }
    ExtendedLambda prev = ExtendedLambda::NegInf();
    for (double g : DefaultGammaGrid()) {
      const auto l =
          Calibrate(recs, MakeSelection(kind), MakeAdm(agg), g).lambda_hat;
      EXPECT_LE(prev, l);
      prev = l;
    }
  }
}

TEST(CoincidentBreakpointsTest, Counts) {
  const std::vector<StepFunction> p{Step({1, 2}, {0, 0, 1}, 1),
                                    Step({2, 3}, {0, 1, 1}, 1),
                                    Step({4}, {0, 1}, 1)};
  EXPECT_EQ(CoincidentBreakpoints(p), 2u);
}

}  // namespace
}  // namespace confgen
