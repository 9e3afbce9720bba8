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

#include "confgen/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "confgen/error.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace confgen {
namespace {

using testing::L;
using testing::MakeAdm;

GenerationRecord Single(double score) {
  GenerationRecord r;
  r.scores = {{score}, Direction::kDown};
  r.adms.values = {1.0};
  return r;
}

TEST(GammaGridTest, Default) {
  const auto g = DefaultGammaGrid();
  ASSERT_EQ(g.size(), 19u);
  EXPECT_EQ(g.front(), 1 / 20.0);
  EXPECT_EQ(g[9], 10 / 20.0);
  EXPECT_EQ(g.back(), 19 / 20.0);
}

TEST(SweepTest, TwoRecordExample) {
  const std::vector<GenerationRecord> recs{Single(0.5), Single(0.7)};
  const std::vector<double> grid{0.6, 0.0};
  const auto rows = Sweep(recs, recs, MakeSelection(SelectorKind::kBelowLambda),
                          MakeAdm(AggKind::kMax), grid);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].gamma, 0.0);
  EXPECT_EQ(rows[0].lambda_hat, ExtendedLambda::NegInf());
  EXPECT_EQ(rows[0].mean_test_admissibility, 0.0);
  EXPECT_EQ(rows[0].mean_output_size, 0.0);
  EXPECT_EQ(rows[1].lambda_hat, L(0.7));
  EXPECT_EQ(rows[1].mean_test_admissibility, 1.0);
  EXPECT_EQ(rows[1].mean_output_size, 1.0);
  EXPECT_EQ(rows[1].n_cal, 2u);
  EXPECT_EQ(rows[1].n_test, 2u);
}

TEST(SweepTest, AllAbstain) {
  const std::vector<GenerationRecord> recs{Single(0.5), Single(0.7)};
  AdmissibilitySpec adm = MakeAdm(AggKind::kMax);
  adm.abstain = 0.8;
  const std::vector<double> grid{1.2};
  const auto rows = Sweep(recs, recs, MakeSelection(SelectorKind::kBelowLambda),
                          adm, grid);
  EXPECT_EQ(rows[0].lambda_hat, ExtendedLambda::PosInf());
  EXPECT_EQ(rows[0].mean_test_admissibility, 0.8);
  EXPECT_EQ(rows[0].mean_output_size, 1.0);
}

TEST(SweepTest, MonotoneInGamma) {
  std::mt19937_64 rng(12);
  ProcessSpec proc;
  const auto cal = GenerateRecords(proc, Direction::kUp, 100, rng);
  const auto test = GenerateRecords(proc, Direction::kUp, 100, rng);
  const auto grid = DefaultGammaGrid();
  const auto rows = Sweep(cal, test, MakeSelection(SelectorKind::kRunningMax),
                          MakeAdm(AggKind::kMax), grid);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i - 1].lambda_hat, rows[i].lambda_hat);
    EXPECT_LE(rows[i - 1].mean_output_size, rows[i].mean_output_size);
  }
}

TEST(ProcessTest, ValidationAndLinks) {
  ProcessSpec proc;
  proc.score.p2 = -1.0;
  EXPECT_THROW(Validate(proc), Error);
  proc = ProcessSpec{};
  proc.min_elements = 0;
  EXPECT_THROW(Validate(proc), Error);
  proc = ProcessSpec{};
  proc.link = {LinkModel::Kind::kConstant, 1.5, 0.0};
  EXPECT_THROW(Validate(proc), Error);
  EXPECT_EQ((LinkModel{LinkModel::Kind::kLogistic, 1.0, 0.0}).Probability(0.0),
            0.5);
}

TEST(ProcessTest, GenerateRespectsDirection) {
  ProcessSpec proc;
  proc.min_elements = 2;
  proc.max_elements = 5;
  std::mt19937_64 a(3);
  std::mt19937_64 b(3);
  const auto up = GenerateRecords(proc, Direction::kUp, 20, a);
  const auto down = GenerateRecords(proc, Direction::kDown, 20, b);
  for (std::size_t i = 0; i < up.size(); ++i) {
    ASSERT_EQ(up[i].scores.scores.size(), down[i].scores.scores.size());
    EXPECT_GE(up[i].scores.scores.size(), 2u);
    EXPECT_LE(up[i].scores.scores.size(), 5u);
    for (std::size_t t = 0; t < up[i].scores.scores.size(); ++t) {
      EXPECT_EQ(up[i].scores.scores[t], -down[i].scores.scores[t]);
      const double v = up[i].adms.values[t];
      EXPECT_TRUE(v == 0.0 || v == 1.0);
    }
  }
}

TEST(SimulateTest, SaturatedCoverage) {
  ProcessSpec proc;
  proc.link = {LinkModel::Kind::kConstant, 1.0, 0.0};
  const auto grid = DefaultGammaGrid();
  const auto res = Simulate(proc, 2, 5, 3, MakeSelection(SelectorKind::kRunningMax),
                            MakeAdm(AggKind::kMax), grid);
  for (const auto& row : res.rows) EXPECT_EQ(row.mean_coverage, 1.0);
}

TEST(SimulateTest, ForcedAbstention) {
  ProcessSpec proc;
  proc.link = {LinkModel::Kind::kConstant, 0.0, 0.0};
  AdmissibilitySpec adm = MakeAdm(AggKind::kMax);
  const auto grid = DefaultGammaGrid();
  const auto res = Simulate(proc, 10, 10, 3,
                            MakeSelection(SelectorKind::kRunningMax), adm, grid);
  for (const auto& row : res.rows) {
    EXPECT_EQ(row.frac_abstain, 1.0);
    EXPECT_EQ(row.mean_coverage, 1.0);
    EXPECT_EQ(row.LambdaHatLiteral(), "inf");
  }
}

TEST(SimulateTest, Deterministic) {
  ProcessSpec proc;
  proc.seed = 42;
  const std::vector<double> grid{0.5, 0.7};
  auto run = [&] {
    const auto res = Simulate(proc, 30, 30, 5,
                              MakeSelection(SelectorKind::kRunningMax),
                              MakeAdm(AggKind::kMax), grid);
    std::ostringstream os;
    WriteCoverageCsv(os, res.rows);
    return os.str();
  };
  const std::string first = run();
  EXPECT_EQ(first, run());
  proc.seed = 43;
  EXPECT_NE(first, run());
}

TEST(SimulateTest, DeriveSeedSpreads) {
  EXPECT_NE(DeriveSeed(0, 0), DeriveSeed(0, 1));
  EXPECT_NE(DeriveSeed(0, 0), DeriveSeed(1, 0));
  EXPECT_EQ(DeriveSeed(7, 3), DeriveSeed(7, 3));
}

ForestData AllCorrect(std::size_t n, std::size_t t) {
  ForestData d;
  d.correct.assign(n, std::vector<int>(t, 1));
  d.weights = {std::vector<double>(t, 1.0)};
  for (std::size_t j = 0; j < t; ++j) d.weights[0][j] = 1.0 + 0.1 * j;
  return d;
}

TEST(ForestDemoTest, AllCorrectNeedsOneTree) {
  const auto d = AllCorrect(20, 8);
  const std::vector<double> grid{0.5, 0.9};
  const auto rows = ForestDemo(d, d, 1, grid);
  for (const auto& r : rows) {
    EXPECT_EQ(r.sweep.mean_output_size, 1.0);
    EXPECT_EQ(r.sweep.mean_test_admissibility, 1.0);
    EXPECT_TRUE(r.majority_meaningful);
  }
}

TEST(ForestDemoTest, UnattainableCountAbstains) {
  ForestData d = AllCorrect(10, 6);
  for (auto& row : d.correct) {
    for (std::size_t j = 2; j < row.size(); ++j) row[j] = 0;
  }
  const std::vector<double> grid{0.1, 0.5};
  for (const auto& r : ForestDemo(d, d, 3, grid)) {
    EXPECT_EQ(r.sweep.lambda_hat, ExtendedLambda::PosInf());
  }
  EXPECT_THROW(ForestDemo(d, d, 7, grid), Error);
}

TEST(ForestDemoTest, ProfilesMatchSubsetBruteForce) {
  ForestProcess fp;
  fp.n_trees = 12;
  std::mt19937_64 rng(21);
  const ForestData data = GenerateForest(fp, 40, rng);
  const auto records = ForestRecords(data);
  const auto sel = ForestSelection();
  for (int k : {1, 3, 6}) {
    const auto adm = ForestAdmissibility(k);
    for (const auto& r : records) {
      const auto f = RecordProfile(r, sel, adm);
      // Independent check: enumerate every lambda candidate from all subset
      // sums and compare against the sorted-prefix rule.
      std::vector<double> cand;
      const auto& s = r.scores.scores;
      for (std::uint32_t mask = 1; mask < (1u << s.size()); ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (mask & (1u << i)) sum += s[i];
        }
        cand.push_back(sum);
      }
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (std::size_t c = 0; c < cand.size(); c += 37) {
        const auto l = L(cand[c]);
        ASSERT_EQ(f.Eval(l), oracle::NaiveAdmissibility(r, sel, adm, l));
      }
      ASSERT_EQ(f.Eval(ExtendedLambda::NegInf()),
                oracle::NaiveAdmissibility(r, sel, adm,
                                           ExtendedLambda::NegInf()));
    }
  }
}

TEST(ForestDemoTest, PerRecordWeights) {
  ForestData d = AllCorrect(3, 4);
  d.weights.assign(3, {1.0, 2.0, 3.0, 4.0});
  d.weights[1] = {4.0, 3.0, 2.0, 1.0};
  const auto recs = ForestRecords(d);
  EXPECT_EQ(recs[1].scores.scores, (std::vector<double>{4, 3, 2, 1}));
  d.weights.assign(2, {1.0, 1.0, 1.0, 1.0});
  EXPECT_THROW(ForestRecords(d), Error);
}

TEST(CsvTest, SweepFormat) {
  const std::vector<GenerationRecord> recs{Single(0.5), Single(0.7)};
  const std::vector<double> grid{0.0, 0.6};
  const auto rows = Sweep(recs, recs, MakeSelection(SelectorKind::kBelowLambda),
                          MakeAdm(AggKind::kMax), grid);
  std::ostringstream os;
  WriteSweepCsv(os, rows);
  EXPECT_EQ(os.str(),
            "gamma,lambda_hat,mean_test_admissibility,se,mean_output_size,"
            "mean_pulled,H_bar\n"
            "0,-inf,0,0,0,1,nan\n"
            "0.6,0.7,1,0,1,1,nan\n");
}

}  // namespace
}  // namespace confgen
