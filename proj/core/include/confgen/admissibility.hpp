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

#ifndef CONFGEN_ADMISSIBILITY_HPP_
#define CONFGEN_ADMISSIBILITY_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confgen/selection.hpp"
#include "confgen/step_function.hpp"

namespace confgen {

enum class AggKind { kMax, kMin, kRecall, kCountAtLeast };

std::string_view AggName(AggKind kind);
std::optional<AggKind> ParseAgg(std::string_view name);

// How selected per-element admissibilities A'_t become the admissibility A of
// a selection, plus the range and abstention conventions.
//
// All user-facing values (a_max, abstain, instance values, gamma) are in the
// original scale [a_min, a_max]. Step-function profiles live in the shifted
// scale A - a_min, which is non-negative.
struct AdmissibilitySpec {
  AggKind agg = AggKind::kMax;
  double beta = 1.0;  // kRecall threshold on sum / N.
  int k = 1;          // kCountAtLeast threshold on sum.
  std::optional<double> a_max = 1.0;
  double a_min = 0.0;
  std::optional<double> abstain;  // Defaults to a_max.

  // Throws Error(kConfiguration) when abstain is needed but a_max is unset.
  double abstain_value() const;
  // a_max - a_min; throws when a_max is unset.
  double shifted_max() const;
};

// Throws Error(kConfiguration) naming the violated rule.
void Validate(const AdmissibilitySpec& spec);

struct InstanceAdmissibilities {
  std::vector<double> values;
  // Relevant-element count N for kRecall. Defaults to the sum of all values.
  std::optional<double> normalizer;
};

// Checks every value against [a_min, a_max].
void Validate(const AdmissibilitySpec& spec,
              const InstanceAdmissibilities& adms);

// agg over the selected values, in the original scale.
//   kMax: max, empty -> a_min.   kMin: min, empty -> a_max.
//   kRecall: sum/normalizer >= beta ? a_max : a_min (normalizer 0 counts as
//            full recall).
//   kCountAtLeast: sum >= k ? a_max : a_min.
double Aggregate(const AdmissibilitySpec& spec,
                 std::span<const double> selected_values, double normalizer);

// Aggregate over `indices` of a record's instance admissibilities, resolving
// the default normalizer.
double Aggregate(const AdmissibilitySpec& spec,
                 const InstanceAdmissibilities& adms,
                 std::span<const std::size_t> indices);

// Whether (selector, aggregator) is one of the tabulated pairs whose profile
// is non-decreasing in lambda.
bool IsCompatible(SelectorKind selector, AggKind agg);

// lambda -> A(lambda) - a_min for one record, evaluated once per selection
// segment at its left endpoint; +inf maps to abstain - a_min. Only the fixed
// instance values are consumed, so swapping the selection spec never needs
// new admissibility evaluations.
StepFunction InstanceProfile(const ScoreSequence& scores,
                             const InstanceAdmissibilities& adms,
                             const SelectionSpec& sel,
                             const AdmissibilitySpec& adm,
                             std::span<const std::string> dedup_keys = {});

}  // namespace confgen

#endif  // CONFGEN_ADMISSIBILITY_HPP_
