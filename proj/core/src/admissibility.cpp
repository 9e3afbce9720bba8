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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "confgen/error.hpp"

namespace confgen {

std::string_view AggName(AggKind kind) {
  switch (kind) {
    case AggKind::kMax:
      return "max";
    case AggKind::kMin:
      return "min";
    case AggKind::kRecall:
      return "recall";
    case AggKind::kCountAtLeast:
      return "count_at_least";
  }
  return "unknown";
}

std::optional<AggKind> ParseAgg(std::string_view name) {
  if (name == "max") return AggKind::kMax;
  if (name == "min") return AggKind::kMin;
  if (name == "recall") return AggKind::kRecall;
  if (name == "count_at_least") return AggKind::kCountAtLeast;
  return std::nullopt;
}

double AdmissibilitySpec::shifted_max() const {
  if (!a_max) {
    throw Error(ErrorCode::kConfiguration, "a_max is required");
  }
  return *a_max - a_min;
}

double AdmissibilitySpec::abstain_value() const {
  if (abstain) return *abstain;
  if (!a_max) {
    throw Error(ErrorCode::kConfiguration,
                "abstain value defaults to a_max, which is unset");
  }
  return *a_max;
}

void Validate(const AdmissibilitySpec& spec) {
  if (!std::isfinite(spec.a_min)) {
    throw Error(ErrorCode::kConfiguration, "a_min must be finite");
  }
  if (spec.a_max && !(std::isfinite(*spec.a_max) && *spec.a_max > spec.a_min)) {
    throw Error(ErrorCode::kConfiguration, "a_max must be finite and > a_min");
  }
  if (spec.agg == AggKind::kRecall &&
      !(spec.beta >= 0.0 && spec.beta <= 1.0)) {
    throw Error(ErrorCode::kConfiguration, "recall beta must lie in [0, 1]");
  }
  if (spec.agg == AggKind::kCountAtLeast && spec.k < 1) {
    throw Error(ErrorCode::kConfiguration, "count_at_least k must be >= 1");
  }
  if ((spec.agg == AggKind::kRecall || spec.agg == AggKind::kCountAtLeast) &&
      !spec.a_max) {
    throw Error(ErrorCode::kConfiguration,
                std::string(AggName(spec.agg)) + " requires a_max");
  }
  if (spec.abstain || spec.a_max) {
    const double abstain = spec.abstain_value();
    if (!std::isfinite(abstain) || abstain < spec.a_min ||
        (spec.a_max && abstain > *spec.a_max)) {
      throw Error(ErrorCode::kConfiguration,
                  "abstain value must lie in [a_min, a_max]");
    }
  } else {
    throw Error(ErrorCode::kConfiguration,
                "either a_max or an explicit abstain value is required");
  }
}

void Validate(const AdmissibilitySpec& spec,
              const InstanceAdmissibilities& adms) {
  for (double v : adms.values) {
    if (!std::isfinite(v) || v < spec.a_min ||
        (spec.a_max && v > *spec.a_max)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "instance admissibility " + FormatDouble(v) +
                      " outside [a_min, a_max]");
    }
  }
  if (adms.normalizer &&
      !(std::isfinite(*adms.normalizer) && *adms.normalizer > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalizer must be a positive finite number");
  }
}

double Aggregate(const AdmissibilitySpec& spec,
                 std::span<const double> selected_values, double normalizer) {
  switch (spec.agg) {
    case AggKind::kMax:
      if (selected_values.empty()) return spec.a_min;
      return *std::max_element(selected_values.begin(), selected_values.end());
    case AggKind::kMin:
      if (selected_values.empty()) {
        if (!spec.a_max) {
          throw Error(ErrorCode::kConfiguration,
                      "min over an empty selection needs a_max");
        }
        return *spec.a_max;
      }
      return *std::min_element(selected_values.begin(), selected_values.end());
    case AggKind::kRecall: {
      const double sum =
          std::accumulate(selected_values.begin(), selected_values.end(), 0.0);
      const bool hit = normalizer <= 0.0 || sum / normalizer >= spec.beta;
      return hit ? *spec.a_max : spec.a_min;
    }
    case AggKind::kCountAtLeast: {
      const double sum =
          std::accumulate(selected_values.begin(), selected_values.end(), 0.0);
      return sum >= static_cast<double>(spec.k) ? *spec.a_max : spec.a_min;
    }
  }
  return spec.a_min;
}

double Aggregate(const AdmissibilitySpec& spec,
                 const InstanceAdmissibilities& adms,
                 std::span<const std::size_t> indices) {
  std::vector<double> selected;
  selected.reserve(indices.size());
  for (std::size_t i : indices) selected.push_back(adms.values.at(i));
  double normalizer = 0.0;
  if (spec.agg == AggKind::kRecall) {
    normalizer = adms.normalizer.value_or(
        std::accumulate(adms.values.begin(), adms.values.end(), 0.0));
  }
  return Aggregate(spec, selected, normalizer);
}

bool IsCompatible(SelectorKind selector, AggKind agg) {
  const bool recall_like =
      agg == AggKind::kRecall || agg == AggKind::kCountAtLeast;
  switch (selector) {
    case SelectorKind::kRunningMax:
    case SelectorKind::kRunningSum:
    case SelectorKind::kBelowLambda:
    case SelectorKind::kSmallestSubsetSum:
      return agg == AggKind::kMax || recall_like;
    case SelectorKind::kAboveLambda:
      return agg == AggKind::kMin;
    case SelectorKind::kRunningMaxSingle:
      return agg == AggKind::kMax || agg == AggKind::kMin;
  }
  return false;
}

StepFunction InstanceProfile(const ScoreSequence& scores,
                             const InstanceAdmissibilities& adms,
                             const SelectionSpec& sel,
                             const AdmissibilitySpec& adm,
                             std::span<const std::string> dedup_keys) {
  if (adms.values.size() != scores.scores.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "scores and instance admissibilities differ in length");
  }
  Validate(adm, adms);
  std::vector<double> bps = Breakpoints(sel, scores, dedup_keys);
  std::vector<double> values;
  values.reserve(bps.size() + 1);
  auto value_at = [&](const ExtendedLambda& lambda) {
    const SelectionOutput out = Select(sel, scores, lambda, dedup_keys);
    return Aggregate(adm, adms, out.indices) - adm.a_min;
  };
  values.push_back(value_at(ExtendedLambda::NegInf()));
  for (double b : bps) values.push_back(value_at(ExtendedLambda::Finite(b)));
  const double at_inf = adm.abstain_value() - adm.a_min;
  return StepFunction(std::move(bps), std::move(values), at_inf);
}

}  // namespace confgen
