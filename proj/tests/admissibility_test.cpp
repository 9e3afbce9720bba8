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

#include "confgen/admissibility.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "confgen/error.hpp"
#include "properties.hpp"
#include "test_support.hpp"

namespace confgen {
namespace {

using testing::MakeAdm;
using Idx = std::vector<std::size_t>;

TEST(AggregateTest, Examples) {
  const InstanceAdmissibilities v{{0, 1, 0}, std::nullopt};
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kMax), v, Idx{0, 1}), 1.0);
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kMin), v, Idx{}), 1.0);
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kMax), v, Idx{}), 0.0);

  const InstanceAdmissibilities c{{1, 1, 0}, std::nullopt};
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kCountAtLeast, 1.0, 2), c, Idx{0, 2}),
            0.0);
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kCountAtLeast, 1.0, 2), c, Idx{0, 1}),
            1.0);

  const InstanceAdmissibilities r{{1, 0, 1}, 2.0};
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kRecall, 0.5), r, Idx{0}), 1.0);
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kRecall, 0.6), r, Idx{0}), 0.0);
}

TEST(AggregateTest, RecallDefaultNormalizerIsTotal) {
  const InstanceAdmissibilities r{{1, 0, 1, 1}, std::nullopt};
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kRecall, 0.5), r, Idx{0}), 0.0);
  EXPECT_EQ(Aggregate(MakeAdm(AggKind::kRecall, 0.5), r, Idx{0, 2}), 1.0);
}

TEST(AggregateTest, ScaledToRange) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kCountAtLeast, 1.0, 1);
  adm.a_max = 4.0;
  adm.a_min = -1.0;
  EXPECT_EQ(Aggregate(adm, std::vector<double>{1.0}, 0.0), 4.0);
  EXPECT_EQ(Aggregate(adm, std::vector<double>{}, 0.0), -1.0);
}

TEST(AdmissibilitySpecTest, Validation) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kRecall, 1.5);
  EXPECT_THROW(Validate(adm), Error);
  adm = MakeAdm(AggKind::kCountAtLeast, 1.0, 0);
  EXPECT_THROW(Validate(adm), Error);
  adm = MakeAdm(AggKind::kMax);
  adm.abstain = 2.0;
  EXPECT_THROW(Validate(adm), Error);
  adm = MakeAdm(AggKind::kMax);
  adm.a_min = 1.0;
  EXPECT_THROW(Validate(adm), Error);
  adm = MakeAdm(AggKind::kMax);
  EXPECT_NO_THROW(Validate(adm));
  EXPECT_EQ(adm.abstain_value(), 1.0);
  EXPECT_THROW(
      Validate(adm, InstanceAdmissibilities{{0.5, 1.5}, std::nullopt}), Error);
}

TEST(AdmissibilitySpecTest, UnsetMaxIsAConfigurationError) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kMin);
  adm.a_max.reset();
  try {
    Aggregate(adm, std::vector<double>{}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfiguration);
  }
}

TEST(InstanceProfileTest, BelowLambdaExample) {
  const ScoreSequence s{{-1, -1, -2}, Direction::kDown};
  const InstanceAdmissibilities a{{0, 0, 1}, std::nullopt};
  const auto f = InstanceProfile(s, a, MakeSelection(SelectorKind::kBelowLambda),
                                 MakeAdm(AggKind::kMax));
  EXPECT_EQ(f, testing::Step({-2, -1}, {0, 1, 1}, 1));
}

TEST(InstanceProfileTest, RunningMaxExample) {
  const ScoreSequence s{{0.2, 0.5, 0.3}, Direction::kUp};
  const InstanceAdmissibilities a{{0, 1, 0}, std::nullopt};
  const auto f = InstanceProfile(s, a, MakeSelection(SelectorKind::kRunningMax),
                                 MakeAdm(AggKind::kMax));
  EXPECT_EQ(f, testing::Step({0.2, 0.5}, {0, 1, 1}, 1));
}

TEST(InstanceProfileTest, SaturatedIsConstant) {
  std::mt19937_64 rng(8);
  for (auto kind : testing::kAllSelectors) {
    // Below every score BELOW_LAMBDA selects nothing, and an empty MAX is 0.
    if (!IsCompatible(kind, AggKind::kMax) ||
        kind == SelectorKind::kBelowLambda) {
      continue;
    }
    const ScoreSequence s{testing::RandomScores(kind, 6, false, rng),
                          RequiredDirection(kind)};
    const InstanceAdmissibilities a{std::vector<double>(6, 1.0), std::nullopt};
    const auto f =
        InstanceProfile(s, a, MakeSelection(kind), MakeAdm(AggKind::kMax));
    for (double v : f.segment_values()) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(f.value_at_pos_inf(), 1.0);
  }
}

TEST(InstanceProfileTest, ShiftedScale) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kMax);
  adm.a_min = -1.0;
  adm.a_max = 1.0;
  const ScoreSequence s{{0.2, 0.5}, Direction::kUp};
  const InstanceAdmissibilities a{{-1.0, 0.5}, std::nullopt};
  const auto f =
      InstanceProfile(s, a, MakeSelection(SelectorKind::kRunningMax), adm);
  EXPECT_EQ(f, testing::Step({0.2}, {0.0, 1.5}, 2.0));
}

TEST(InstanceProfileTest, CustomAbstain) {
  AdmissibilitySpec adm = MakeAdm(AggKind::kMax);
  adm.abstain = 0.7;
  const ScoreSequence s{{0.2}, Direction::kUp};
  const auto f =
      InstanceProfile(s, InstanceAdmissibilities{{1.0}, std::nullopt},
                      MakeSelection(SelectorKind::kRunningMax), adm);
  EXPECT_EQ(f.value_at_pos_inf(), 0.7);
}

TEST(CompatibilityTest, Table) {
  EXPECT_TRUE(IsCompatible(SelectorKind::kRunningMax, AggKind::kMax));
  EXPECT_TRUE(IsCompatible(SelectorKind::kAboveLambda, AggKind::kMin));
  EXPECT_FALSE(IsCompatible(SelectorKind::kAboveLambda, AggKind::kMax));
  EXPECT_FALSE(IsCompatible(SelectorKind::kBelowLambda, AggKind::kMin));
  EXPECT_TRUE(IsCompatible(SelectorKind::kRunningMaxSingle, AggKind::kMin));
  EXPECT_TRUE(
      IsCompatible(SelectorKind::kSmallestSubsetSum, AggKind::kCountAtLeast));
}

TEST(InstanceProfilePropertyTest, RandomizedInvariants) {
  std::mt19937_64 rng(2024);
  for (auto kind : testing::kAllSelectors) {
    for (AggKind agg : {AggKind::kMax, AggKind::kMin, AggKind::kRecall,
                        AggKind::kCountAtLeast}) {
      for (int trial = 0; trial < 200; ++trial) {
        const std::string fail = properties::CheckProfile(
            kind, agg, 1 + trial % 8, trial % 2 == 0, rng);
        ASSERT_TRUE(fail.empty()) << fail;
      }
    }
  }
}

}  // namespace
}  // namespace confgen
