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

#include <algorithm>
#include <cmath>
#include <map>

#include "confgen/error.hpp"

namespace confgen {
namespace {

double ShiftedGamma(const AdmissibilitySpec& adm, double gamma) {
  if (!std::isfinite(gamma) || gamma < adm.a_min) {
    throw Error(ErrorCode::kInvalidArgument,
                "gamma must be finite and >= a_min (got " +
                    FormatDouble(gamma) + ")");
  }
  return gamma - adm.a_min;
}

// Breakpoints at which a profile's value actually changes.
std::vector<double> Jumps(const StepFunction& f) {
  std::vector<double> out;
  const auto& v = f.segment_values();
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] != v[j - 1]) out.push_back(f.breakpoints()[j - 1]);
  }
  return out;
}

}  // namespace

void Validate(const GenerationRecord& record) {
  const std::size_t len = record.scores.scores.size();
  if (len == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "record '" + record.id + "' has no elements");
  }
  if (record.adms.values.size() != len) {
    throw Error(ErrorCode::kInvalidArgument,
                "record '" + record.id +
                    "': scores and adm have different lengths");
  }
  if (record.dedup_keys && record.dedup_keys->size() != len) {
    throw Error(ErrorCode::kInvalidArgument,
                "record '" + record.id +
                    "': dedup_keys and scores have different lengths");
  }
}

StepFunction RecordProfile(const GenerationRecord& record,
                           const SelectionSpec& sel,
                           const AdmissibilitySpec& adm) {
  Validate(record);
  if (sel.dedup && !record.dedup_keys) {
    throw Error(ErrorCode::kInvalidArgument,
                "record '" + record.id + "' lacks dedup_keys but dedup is on");
  }
  return InstanceProfile(record.scores, record.adms, sel, adm, record.keys());
}

std::vector<StepFunction> RecordProfiles(
    std::span<const GenerationRecord> records, const SelectionSpec& sel,
    const AdmissibilitySpec& adm) {
  std::vector<StepFunction> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(RecordProfile(r, sel, adm));
  return out;
}

std::size_t CoincidentBreakpoints(std::span<const StepFunction> profiles) {
  std::map<double, std::size_t> counts;
  for (const auto& f : profiles) {
    for (double b : Jumps(f)) ++counts[b];
  }
  std::size_t shared = 0;
  for (const auto& [b, c] : counts) {
    if (c > 1) shared += c;
  }
  return shared;
}

CalibrationResult CalibrateFromMean(const StepFunction& mean_profile,
                                    std::size_t n, const AdmissibilitySpec& adm,
                                    double gamma) {
  if (n == 0) {
    throw Error(ErrorCode::kEmptyCalibrationSet, "empty calibration set");
  }
  Validate(adm);
  const double shifted_gamma = ShiftedGamma(adm, gamma);
  const double nd = static_cast<double>(n);
  const double shifted_threshold = (nd + 1.0) * shifted_gamma / nd;

  CalibrationResult result;
  result.gamma = gamma;
  result.n = n;
  result.threshold = adm.a_min + shifted_threshold;
  result.lambda_hat = InfAtLeast(mean_profile, shifted_threshold);
  result.achieved = adm.a_min + mean_profile.Eval(result.lambda_hat);

  const auto& values = mean_profile.segment_values();
  result.trace.reserve(values.size() + 1);
  for (std::size_t j = 0; j < values.size(); ++j) {
    result.trace.push_back({mean_profile.SegmentStart(j), adm.a_min + values[j]});
  }
  result.trace.push_back(
      {ExtendedLambda::PosInf(), adm.a_min + mean_profile.value_at_pos_inf()});

  if (adm.a_max && gamma > *adm.a_max) {
    result.warnings.push_back(
        "gamma exceeds a_max: the guarantee is vacuous and calibration "
        "abstains");
  }
  if (adm.abstain_value() < gamma) {
    result.warnings.push_back(
        "abstain value is below gamma: abstention cannot meet the target");
  }
  if (result.lambda_hat.is_pos_inf()) {
    result.warnings.push_back(
        "no finite lambda reaches the threshold; lambda_hat = inf (abstain)");
  }
  return result;
}

CalibrationResult Calibrate(std::span<const GenerationRecord> records,
                            const SelectionSpec& sel,
                            const AdmissibilitySpec& adm, double gamma) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCalibrationSet, "empty calibration set");
  }
  Validate(sel);
  Validate(adm);
  const auto profiles = RecordProfiles(records, sel, adm);
  CalibrationResult result =
      CalibrateFromMean(Mean(profiles), records.size(), adm, gamma);

  if (!IsCompatible(sel.kind, adm.agg)) {
    result.warnings.push_back(
        std::string("selector ") + std::string(SelectorName(sel.kind)) +
        " with agg " + std::string(AggName(adm.agg)) +
        " is not a tabulated monotone pair; profiles may be non-monotone");
  }
  std::size_t total_jumps = 0;
  for (const auto& f : profiles) total_jumps += Jumps(f).size();
  const std::size_t shared = CoincidentBreakpoints(profiles);
  if (total_jumps > 0 &&
      static_cast<double>(shared) > 0.1 * static_cast<double>(total_jumps)) {
    result.warnings.push_back(
        "more than 10% of record jumps coincide with another record's; the "
        "upper-bound slack H may be inflated");
  }
  return result;
}

ExtendedLambda CpQuantile(std::span<const double> scores, double gamma) {
  if (scores.empty()) {
    throw Error(ErrorCode::kEmptyCalibrationSet, "empty calibration set");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cp quantile needs gamma in (0, 1]");
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double rank = std::ceil((n + 1.0) * gamma);
  if (rank > n) return ExtendedLambda::PosInf();
  const auto k = static_cast<std::size_t>(std::max(rank, 1.0));
  return ExtendedLambda::Finite(sorted[k - 1]);
}

ExtendedLambda CrcCalibrate(std::span<const StepFunction> utility_profiles,
                            double gamma, double lambda_max) {
  const StepFunction mean = Mean(utility_profiles);
  const auto cap = ExtendedLambda::Finite(lambda_max);
  const double n = static_cast<double>(utility_profiles.size());
  const double threshold = (n + 1.0) * gamma / n;
  const auto& values = mean.segment_values();
  for (std::size_t j = 0; j < values.size(); ++j) {
    const ExtendedLambda start = mean.SegmentStart(j);
    if (start > cap) break;
    if (values[j] >= threshold) return start;
  }
  return cap;
}

DiagnosticsReport UpperBoundDiagFromProfiles(
    std::span<const StepFunction> profiles, const AdmissibilitySpec& adm,
    double gamma) {
  if (profiles.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "upper-bound diagnostics need at least two records");
  }
  Validate(adm);
  const double range = adm.shifted_max();
  const double shifted_gamma = ShiftedGamma(adm, gamma);
  const double n1 = static_cast<double>(profiles.size());
  const StepFunction mean = Mean(profiles);

  DiagnosticsReport report;
  report.n_plus_one = profiles.size();
  report.lambda_star = InfAtLeast(mean, shifted_gamma);
  report.lambda_star_star = InfAtLeast(mean, shifted_gamma + range / n1);
  report.h = std::max(mean.Eval(report.lambda_star_star) -
                          SupStrictlyBelow(mean, report.lambda_star_star),
                      0.0);
  report.upper_bound = gamma + range / n1 + report.h;
  const auto monotone = std::count_if(
      profiles.begin(), profiles.end(),
      [](const StepFunction& f) { return f.IsNonDecreasing(); });
  report.monotone_fraction = static_cast<double>(monotone) / n1;
  report.coincident_breakpoints = CoincidentBreakpoints(profiles);
  return report;
}

DiagnosticsReport UpperBoundDiag(std::span<const GenerationRecord> records,
                                 const SelectionSpec& sel,
                                 const AdmissibilitySpec& adm, double gamma) {
  Validate(sel);
  return UpperBoundDiagFromProfiles(RecordProfiles(records, sel, adm), adm,
                                    gamma);
}

}  // namespace confgen
