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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>

#include "confgen/error.hpp"
#include "confgen/infer.hpp"

namespace confgen {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe MeanAndSe(std::span<const double> xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

std::vector<double> SortedGrid(std::span<const double> grid) {
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

// Admissibility of the deployed output: abstain at +inf, otherwise the
// aggregate over the selected elements.
double DeployedAdmissibility(const GenerationRecord& record,
                             const SelectionOutput& out,
                             const AdmissibilitySpec& adm,
                             const ExtendedLambda& lambda_hat) {
  if (lambda_hat.is_pos_inf()) return adm.abstain_value();
  return Aggregate(adm, record.adms, out.indices);
}

using RecordGenerator =
    std::function<std::vector<GenerationRecord>(std::mt19937_64&, std::size_t)>;

SimulationResult SimulateWith(const RecordGenerator& generate,
                              std::uint64_t seed, std::size_t n_cal,
                              std::size_t n_test, std::size_t reps,
                              const SelectionSpec& sel,
                              const AdmissibilitySpec& adm,
                              std::span<const double> gamma_grid) {
  if (reps == 0 || n_cal == 0 || n_test == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "reps, n_cal and n_test must be positive");
  }
  Validate(sel);
  Validate(adm);
  const std::vector<double> grid = SortedGrid(gamma_grid);
  const std::size_t g = grid.size();

  std::vector<std::vector<double>> coverage(g), lambdas(g), sizes(g),
      pulled(g), hs(g), bounds(g);
  std::vector<std::size_t> abstains(g, 0), neg_infs(g, 0), below(g, 0);

  for (std::size_t rep = 0; rep < reps; ++rep) {
    std::mt19937_64 rng(DeriveSeed(seed, rep));
    const auto cal = generate(rng, n_cal);
    const auto test = generate(rng, n_test);
    const auto cal_profiles = RecordProfiles(cal, sel, adm);
    const auto test_profiles = RecordProfiles(test, sel, adm);
    const StepFunction cal_mean = Mean(cal_profiles);

    std::vector<StepFunction> augmented = cal_profiles;
    augmented.push_back(test_profiles.front());

    for (std::size_t gi = 0; gi < g; ++gi) {
      const double gamma = grid[gi];
      const CalibrationResult cr =
          CalibrateFromMean(cal_mean, n_cal, adm, gamma);
      const ExtendedLambda& lh = cr.lambda_hat;

      double adm_sum = 0.0, size_sum = 0.0, pulled_sum = 0.0;
      for (std::size_t i = 0; i < n_test; ++i) {
        adm_sum += test_profiles[i].Eval(lh);
        const SelectionOutput out = Apply(sel, lh, test[i]);
        size_sum += static_cast<double>(out.indices.size());
        pulled_sum += static_cast<double>(out.pulled_count);
      }
      const double nt = static_cast<double>(n_test);
      const double test_mean = adm.a_min + adm_sum / nt;
      coverage[gi].push_back(test_mean);
      sizes[gi].push_back(size_sum / nt);
      pulled[gi].push_back(pulled_sum / nt);
      if (test_mean < gamma) ++below[gi];
      if (lh.is_finite()) {
        lambdas[gi].push_back(lh.value());
      } else if (lh.is_pos_inf()) {
        ++abstains[gi];
      } else {
        ++neg_infs[gi];
      }

      const DiagnosticsReport diag =
          UpperBoundDiagFromProfiles(augmented, adm, gamma);
      hs[gi].push_back(diag.h);
      bounds[gi].push_back(diag.upper_bound);
    }
  }

  SimulationResult result;
  const double r = static_cast<double>(reps);
  for (std::size_t gi = 0; gi < g; ++gi) {
    CoverageRow row;
    row.gamma = grid[gi];
    const MeanSe cov = MeanAndSe(coverage[gi]);
    row.mean_coverage = cov.mean;
    row.se = cov.se;
    row.mean_lambda_hat = lambdas[gi].empty()
                              ? std::nan("")
                              : MeanAndSe(lambdas[gi]).mean;
    row.frac_abstain = static_cast<double>(abstains[gi]) / r;
    row.frac_neg_inf = static_cast<double>(neg_infs[gi]) / r;
    row.mean_output_size = MeanAndSe(sizes[gi]).mean;
    row.mean_pulled = MeanAndSe(pulled[gi]).mean;
    row.h_bar = MeanAndSe(hs[gi]).mean;
    row.mean_upper_bound = MeanAndSe(bounds[gi]).mean;
    row.frac_below_gamma = static_cast<double>(below[gi]) / r;
    row.reps = reps;
    row.n_cal = n_cal;
    row.n_test = n_test;
    result.rows.push_back(row);
  }
  if (!IsCompatible(sel.kind, adm.agg)) {
    result.warnings.push_back(
        "selector/aggregator pair is not monotone-compatible; coverage may "
        "not hold");
  }
  return result;
}

}  // namespace

std::vector<double> DefaultGammaGrid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
  return grid;
}

std::vector<SweepRow> Sweep(std::span<const GenerationRecord> cal,
                            std::span<const GenerationRecord> test,
                            const SelectionSpec& sel,
                            const AdmissibilitySpec& adm,
                            std::span<const double> gamma_grid) {
  if (test.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty test set");
  }
  Validate(sel);
  Validate(adm);
  const auto profiles = RecordProfiles(cal, sel, adm);
  const StepFunction mean = Mean(profiles);

  std::vector<SweepRow> rows;
  for (double gamma : SortedGrid(gamma_grid)) {
    const CalibrationResult cr =
        CalibrateFromMean(mean, cal.size(), adm, gamma);
    std::vector<double> adms;
    adms.reserve(test.size());
    double size_sum = 0.0, pulled_sum = 0.0;
    for (const auto& record : test) {
      const SelectionOutput out = Apply(sel, cr.lambda_hat, record);
      adms.push_back(DeployedAdmissibility(record, out, adm, cr.lambda_hat));
      size_sum += static_cast<double>(out.indices.size());
      pulled_sum += static_cast<double>(out.pulled_count);
    }
    const MeanSe stats = MeanAndSe(adms);
    const double nt = static_cast<double>(test.size());
    rows.push_back(SweepRow{gamma, cr.lambda_hat, stats.mean, stats.se,
                            size_sum / nt, pulled_sum / nt, cal.size(),
                            test.size()});
  }
  return rows;
}

double LinkModel::Probability(double score) const {
  if (kind == Kind::kConstant) return a;
  return 1.0 / (1.0 + std::exp(-(a * score + b)));
}

void Validate(const ProcessSpec& proc) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  if (proc.min_elements < 1 || proc.min_elements > proc.max_elements) {
    fail("need 1 <= min_elements <= max_elements");
  }
  const ScoreModel& s = proc.score;
  if (!std::isfinite(s.p1) || !std::isfinite(s.p2)) {
    fail("score model parameters must be finite");
  }
  switch (s.kind) {
    case ScoreModel::Kind::kNormal:
      if (s.p2 < 0.0) fail("normal stddev must be >= 0");
      break;
    case ScoreModel::Kind::kUniform:
      if (s.p1 > s.p2) fail("uniform low must be <= high");
      break;
    case ScoreModel::Kind::kExponential:
      if (!(s.p1 > 0.0)) fail("exponential rate must be > 0");
      break;
  }
  const LinkModel& l = proc.link;
  if (!std::isfinite(l.a) || !std::isfinite(l.b)) {
    fail("link parameters must be finite");
  }
  if (l.kind == LinkModel::Kind::kConstant && !(l.a >= 0.0 && l.a <= 1.0)) {
    fail("constant link probability must lie in [0, 1]");
  }
  if (!(std::isfinite(proc.a_max) && proc.a_max > 0.0)) {
    fail("process a_max must be positive");
  }
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<GenerationRecord> GenerateRecords(const ProcessSpec& proc,
                                              Direction direction,
                                              std::size_t count,
                                              std::mt19937_64& rng) {
  Validate(proc);
  std::uniform_int_distribution<std::size_t> length(proc.min_elements,
                                                    proc.max_elements);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_score = [&]() {
    switch (proc.score.kind) {
      case ScoreModel::Kind::kNormal:
        return std::normal_distribution<double>(proc.score.p1,
                                                proc.score.p2)(rng);
      case ScoreModel::Kind::kUniform:
        return std::uniform_real_distribution<double>(proc.score.p1,
                                                      proc.score.p2)(rng);
      case ScoreModel::Kind::kExponential:
        return std::exponential_distribution<double>(proc.score.p1)(rng);
    }
    return 0.0;
  };

  std::vector<GenerationRecord> records;
  records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GenerationRecord r;
    r.id = std::to_string(i);
    r.scores.direction = direction;
    const std::size_t len = length(rng);
    for (std::size_t t = 0; t < len; ++t) {
      const double s = draw_score();
      const bool ok = unit(rng) < proc.link.Probability(s);
      r.scores.scores.push_back(direction == Direction::kDown ? -s : s);
      r.adms.values.push_back(ok ? proc.a_max : 0.0);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string CoverageRow::LambdaHatLiteral() const {
  if (!std::isnan(mean_lambda_hat)) return FormatDouble(mean_lambda_hat);
  return frac_abstain > 0.0 ? "inf" : "-inf";
}

SimulationResult Simulate(const ProcessSpec& proc, std::size_t n_cal,
                          std::size_t n_test, std::size_t reps,
                          const SelectionSpec& sel,
                          const AdmissibilitySpec& adm,
                          std::span<const double> gamma_grid) {
  Validate(proc);
  const Direction direction = sel.direction;
  RecordGenerator gen = [&](std::mt19937_64& rng, std::size_t count) {
    return GenerateRecords(proc, direction, count, rng);
  };
  SimulationResult result =
      SimulateWith(gen, proc.seed, n_cal, n_test, reps, sel, adm, gamma_grid);
  const bool constant_scores =
      (proc.score.kind == ScoreModel::Kind::kNormal && proc.score.p2 == 0.0) ||
      (proc.score.kind == ScoreModel::Kind::kUniform &&
       proc.score.p1 == proc.score.p2);
  if (constant_scores) {
    result.warnings.push_back(
        "degenerate process: zero-variance scores make every record jump at "
        "the same lambda");
  }
  return result;
}

std::vector<GenerationRecord> ForestRecords(const ForestData& data) {
  const std::size_t n = data.correct.size();
  if (data.weights.size() != 1 && data.weights.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "forest weights must be a single row or one row per example");
  }
  std::vector<GenerationRecord> records;
  records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& w = data.weights.size() == 1 ? data.weights[0] : data.weights[i];
    const auto& c = data.correct[i];
    if (w.size() != c.size() || c.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "forest row " + std::to_string(i) +
                      ": weights and correctness differ in length");
    }
    GenerationRecord r;
    r.id = std::to_string(i);
    r.scores = {w, Direction::kUp};
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (c[t] != 0 && c[t] != 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "forest correctness entries must be 0 or 1");
      }
      if (!(w[t] > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "forest weights must be positive");
      }
      r.adms.values.push_back(static_cast<double>(c[t]));
    }
    records.push_back(std::move(r));
  }
  return records;
}

SelectionSpec ForestSelection() {
  return MakeSelection(SelectorKind::kSmallestSubsetSum);
}

AdmissibilitySpec ForestAdmissibility(int k) {
  AdmissibilitySpec adm;
  adm.agg = AggKind::kCountAtLeast;
  adm.k = k;
  adm.a_max = 1.0;
  return adm;
}

namespace {

void CheckForestK(const ForestData& data, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  for (const auto& row : data.correct) {
    if (static_cast<std::size_t>(k) > row.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "k = " + std::to_string(k) + " exceeds the number of trees");
    }
  }
}

}  // namespace

std::vector<ForestRow> ForestDemo(const ForestData& cal, const ForestData& test,
                                  int k, std::span<const double> gamma_grid) {
  CheckForestK(cal, k);
  CheckForestK(test, k);
  const auto cal_records = ForestRecords(cal);
  const auto test_records = ForestRecords(test);
  const auto rows = Sweep(cal_records, test_records, ForestSelection(),
                          ForestAdmissibility(k), gamma_grid);
  std::vector<ForestRow> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({row, row.mean_output_size <= 2.0 * k - 1.0});
  }
  return out;
}

ForestData GenerateForest(const ForestProcess& proc, std::size_t n,
                          std::mt19937_64& rng) {
  if (proc.n_trees == 0 || !(proc.accuracy >= 0.0 && proc.accuracy <= 1.0) ||
      !(proc.weight_low > 0.0 && proc.weight_low <= proc.weight_high)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid forest process");
  }
  std::bernoulli_distribution correct(proc.accuracy);
  std::uniform_real_distribution<double> weight(proc.weight_low,
                                                proc.weight_high);
  ForestData data;
  data.correct.resize(n);
  data.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < proc.n_trees; ++t) {
      data.correct[i].push_back(correct(rng) ? 1 : 0);
      data.weights[i].push_back(weight(rng));
    }
  }
  return data;
}

SimulationResult SimulateForest(const ForestProcess& proc, std::size_t n_cal,
                                std::size_t n_test, std::size_t reps, int k,
                                std::span<const double> gamma_grid) {
  if (k < 1 || static_cast<std::size_t>(k) > proc.n_trees) {
    throw Error(ErrorCode::kInvalidArgument, "k must lie in [1, n_trees]");
  }
  RecordGenerator gen = [&](std::mt19937_64& rng, std::size_t count) {
    return ForestRecords(GenerateForest(proc, count, rng));
  };
  return SimulateWith(gen, proc.seed, n_cal, n_test, reps, ForestSelection(),
                      ForestAdmissibility(k), gamma_grid);
}

namespace {

void WriteSweepFields(std::ostream& os, const SweepRow& r) {
  os << FormatDouble(r.gamma) << ',' << r.lambda_hat.ToString() << ','
     << FormatDouble(r.mean_test_admissibility) << ',' << FormatDouble(r.se)
     << ',' << FormatDouble(r.mean_output_size) << ','
     << FormatDouble(r.mean_pulled) << ",nan";
}

constexpr const char* kSweepHeader =
    "gamma,lambda_hat,mean_test_admissibility,se,mean_output_size,mean_pulled,"
    "H_bar";

}  // namespace

void WriteSweepCsv(std::ostream& os, std::span<const SweepRow> rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    WriteSweepFields(os, r);
    os << '\n';
  }
}

void WriteForestCsv(std::ostream& os, std::span<const ForestRow> rows) {
  os << kSweepHeader << ",majority_meaningful\n";
  for (const auto& r : rows) {
    WriteSweepFields(os, r.sweep);
    os << ',' << (r.majority_meaningful ? 1 : 0) << '\n';
  }
}

void WriteCoverageCsv(std::ostream& os, std::span<const CoverageRow> rows) {
  os << kSweepHeader << ",upper_bound,frac_below_gamma,frac_abstain,reps\n";
  for (const auto& r : rows) {
    os << FormatDouble(r.gamma) << ',' << r.LambdaHatLiteral() << ','
       << FormatDouble(r.mean_coverage) << ',' << FormatDouble(r.se) << ','
       << FormatDouble(r.mean_output_size) << ','
       << FormatDouble(r.mean_pulled) << ',' << FormatDouble(r.h_bar) << ','
       << FormatDouble(r.mean_upper_bound) << ','
       << FormatDouble(r.frac_below_gamma) << ','
       << FormatDouble(r.frac_abstain) << ',' << r.reps << '\n';
  }
}

}  // namespace confgen
