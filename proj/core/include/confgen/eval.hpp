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

#ifndef CONFGEN_EVAL_HPP_
#define CONFGEN_EVAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "confgen/admissibility.hpp"
#include "confgen/calibrate.hpp"
#include "confgen/selection.hpp"

namespace confgen {

// Evenly spaced grid 0.05, 0.10, ..., 0.95 (each point computed as k / 20).
std::vector<double> DefaultGammaGrid();

struct SweepRow {
  double gamma = 0.0;
  ExtendedLambda lambda_hat;
  double mean_test_admissibility = 0.0;
  double se = 0.0;  // standard error over test records
  double mean_output_size = 0.0;
  double mean_pulled = 0.0;
  std::size_t n_cal = 0;
  std::size_t n_test = 0;
};

// Calibrates on `cal` for each gamma, applies lambda_hat to every test record
// and averages the resulting admissibility (abstain value at lambda_hat = inf).
// Rows are sorted by gamma. A single split may dip below gamma; the guarantee
// holds in expectation over calibration draws.
std::vector<SweepRow> Sweep(std::span<const GenerationRecord> cal,
                            std::span<const GenerationRecord> test,
                            const SelectionSpec& sel,
                            const AdmissibilitySpec& adm,
                            std::span<const double> gamma_grid);

// --- Synthetic data process -------------------------------------------------

struct ScoreModel {
  enum class Kind { kNormal, kUniform, kExponential };
  Kind kind = Kind::kNormal;
  double p1 = 0.0;  // normal: mean, uniform: low, exponential: rate
  double p2 = 1.0;  // normal: stddev, uniform: high, unused for exponential
};

// Probability that an element with ("up") score s is admissible.
struct LinkModel {
  enum class Kind { kLogistic, kConstant };
  Kind kind = Kind::kLogistic;
  double a = 1.0;  // logistic slope, or the constant probability
  double b = 0.0;  // logistic intercept

  double Probability(double score) const;
};

struct ProcessSpec {
  std::size_t min_elements = 10;
  std::size_t max_elements = 10;
  ScoreModel score;
  LinkModel link;
  double a_max = 1.0;  // admissible elements get a_max, others 0
  std::uint64_t seed = 0;
};

// Throws Error(kInvalidArgument) on bad distribution parameters.
void Validate(const ProcessSpec& proc);

// Derives the per-rep seed stream from a master seed (SplitMix64 step).
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

// Draws `count` records. Scores are drawn in the "up" orientation and negated
// when `direction` is kDown.
std::vector<GenerationRecord> GenerateRecords(const ProcessSpec& proc,
                                              Direction direction,
                                              std::size_t count,
                                              std::mt19937_64& rng);

struct CoverageRow {
  double gamma = 0.0;
  double mean_coverage = 0.0;  // rep-average of the test-set mean
  double se = 0.0;             // standard error across reps
  double mean_lambda_hat = 0.0;  // over reps with finite lambda_hat
  double frac_abstain = 0.0;     // reps with lambda_hat = inf
  double frac_neg_inf = 0.0;     // reps with lambda_hat = -inf
  double mean_output_size = 0.0;
  double mean_pulled = 0.0;
  double h_bar = 0.0;              // rep-average of H
  double mean_upper_bound = 0.0;   // gamma + a_max/(n+1) + H, rep-averaged
  double frac_below_gamma = 0.0;   // reps whose test mean fell below gamma
  std::size_t reps = 0;
  std::size_t n_cal = 0;
  std::size_t n_test = 0;

  // lambda_hat column: the finite mean, or the infinity every rep agreed on.
  std::string LambdaHatLiteral() const;
};

struct SimulationResult {
  std::vector<CoverageRow> rows;
  std::vector<std::string> warnings;
};

// Monte Carlo check of the coverage guarantee: each rep draws fresh
// calibration and test sets, calibrates every gamma, and measures test
// admissibility. H is computed from the calibration set plus the first test
// record of the rep.
SimulationResult Simulate(const ProcessSpec& proc, std::size_t n_cal,
                          std::size_t n_test, std::size_t reps,
                          const SelectionSpec& sel,
                          const AdmissibilitySpec& adm,
                          std::span<const double> gamma_grid);

// --- Random-forest subset selection -----------------------------------------

struct ForestData {
  // n x T, entries in {0, 1}: whether tree t predicts example i correctly.
  std::vector<std::vector<int>> correct;
  // Either n x T, or a single row broadcast to every example. Positive.
  std::vector<std::vector<double>> weights;
};

// One record per example: scores = tree weights ("up"), A' = correctness.
std::vector<GenerationRecord> ForestRecords(const ForestData& data);

SelectionSpec ForestSelection();
AdmissibilitySpec ForestAdmissibility(int k);

struct ForestRow {
  SweepRow sweep;
  // Mean selected subset size is at most 2k - 1, so a correct majority vote
  // among the selected trees is implied by the guarantee.
  bool majority_meaningful = false;
};

// Throws Error(kInvalidArgument) when k exceeds the number of trees.
std::vector<ForestRow> ForestDemo(const ForestData& cal, const ForestData& test,
                                  int k, std::span<const double> gamma_grid);

struct ForestProcess {
  std::size_t n_trees = 20;
  double accuracy = 0.8;  // per-tree i.i.d. probability of a correct vote
  double weight_low = 0.5;
  double weight_high = 1.5;
  std::uint64_t seed = 0;
};

ForestData GenerateForest(const ForestProcess& proc, std::size_t n,
                          std::mt19937_64& rng);

SimulationResult SimulateForest(const ForestProcess& proc, std::size_t n_cal,
                                std::size_t n_test, std::size_t reps, int k,
                                std::span<const double> gamma_grid);

// --- CSV ---------------------------------------------------------------------

// Columns: gamma,lambda_hat,mean_test_admissibility,se,mean_output_size,
// mean_pulled,H_bar. H_bar is "nan" for single-split sweeps.
void WriteSweepCsv(std::ostream& os, std::span<const SweepRow> rows);
// Sweep columns plus majority_meaningful.
void WriteForestCsv(std::ostream& os, std::span<const ForestRow> rows);
// Sweep columns plus upper_bound,frac_below_gamma,frac_abstain,reps.
void WriteCoverageCsv(std::ostream& os, std::span<const CoverageRow> rows);

}  // namespace confgen

#endif  // CONFGEN_EVAL_HPP_
