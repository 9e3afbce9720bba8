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

#ifndef CONFGEN_CALIBRATE_HPP_
#define CONFGEN_CALIBRATE_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "confgen/admissibility.hpp"
#include "confgen/extended_lambda.hpp"
#include "confgen/selection.hpp"
#include "confgen/step_function.hpp"

namespace confgen {

// One calibration or test example: scores of the generated elements and their
// precomputed instance admissibilities. Payloads never enter the engine.
struct GenerationRecord {
  std::string id;
  ScoreSequence scores;
  InstanceAdmissibilities adms;
  std::optional<std::vector<std::string>> dedup_keys;

  std::span<const std::string> keys() const {
    return dedup_keys ? std::span<const std::string>(*dedup_keys)
                      : std::span<const std::string>();
  }
};

// Checks the per-record length invariants.
void Validate(const GenerationRecord& record);

StepFunction RecordProfile(const GenerationRecord& record,
                           const SelectionSpec& sel,
                           const AdmissibilitySpec& adm);

std::vector<StepFunction> RecordProfiles(
    std::span<const GenerationRecord> records, const SelectionSpec& sel,
    const AdmissibilitySpec& adm);

struct TracePoint {
  ExtendedLambda lambda;  // segment start (-inf, a breakpoint, or +inf)
  double mean_admissibility = 0.0;
};

struct CalibrationResult {
  ExtendedLambda lambda_hat;
  double gamma = 0.0;
  // (n + 1) * gamma / n, reported in the original admissibility scale.
  double threshold = 0.0;
  // Mean calibration admissibility at lambda_hat, original scale.
  double achieved = 0.0;
  std::size_t n = 0;
  std::vector<TracePoint> trace;
  std::vector<std::string> warnings;
};

// lambda_hat = inf { lambda : mean_n(lambda) >= (n+1) gamma / n } with +inf as
// the fallback. Throws Error(kEmptyCalibrationSet) / propagates validation
// errors. Incompatible (selector, agg) pairs and gamma above a_max produce
// warnings, not errors.
CalibrationResult Calibrate(std::span<const GenerationRecord> records,
                            const SelectionSpec& sel,
                            const AdmissibilitySpec& adm, double gamma);

// Same rule from a precomputed mean profile (shifted scale) over n records.
CalibrationResult CalibrateFromMean(const StepFunction& mean_profile,
                                    std::size_t n, const AdmissibilitySpec& adm,
                                    double gamma);

// Split conformal quantile: the ceil((n+1) gamma)-th smallest score, +inf
// when that rank exceeds n. Throws for gamma outside (0, 1] or empty input.
ExtendedLambda CpQuantile(std::span<const double> scores, double gamma);

// Conformal risk control on utility profiles:
// inf { lambda <= lambda_max : mean(lambda) >= (n+1) gamma / n } min lambda_max.
ExtendedLambda CrcCalibrate(std::span<const StepFunction> utility_profiles,
                            double gamma, double lambda_max);

struct DiagnosticsReport {
  ExtendedLambda lambda_star;       // inf V(D_{:n+1}, gamma)
  ExtendedLambda lambda_star_star;  // inf V(D_{:n+1}, gamma + a_max/(n+1))
  double h = 0.0;                   // jump of mean_{n+1} at lambda_star_star
  double upper_bound = 0.0;         // gamma + a_max/(n+1) + h
  // Share of per-record profiles that are non-decreasing. A heuristic proxy
  // for monotonicity in conditional expectation, not a verification of it.
  double monotone_fraction = 0.0;
  std::size_t n_plus_one = 0;
  // Breakpoints shared by more than one record profile.
  std::size_t coincident_breakpoints = 0;
};

// Upper-bound diagnostics over n + 1 records (calibration set plus one test
// point). Requires at least two records and a_max.
DiagnosticsReport UpperBoundDiag(std::span<const GenerationRecord> records,
                                 const SelectionSpec& sel,
                                 const AdmissibilitySpec& adm, double gamma);

DiagnosticsReport UpperBoundDiagFromProfiles(
    std::span<const StepFunction> profiles, const AdmissibilitySpec& adm,
    double gamma);

// Number of per-record breakpoints that coincide with another record's.
std::size_t CoincidentBreakpoints(std::span<const StepFunction> profiles);

}  // namespace confgen

#endif  // CONFGEN_CALIBRATE_HPP_
