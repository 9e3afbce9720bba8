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

#include "confgen/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "confgen/error.hpp"

namespace confgen {

StepFunction::StepFunction() : values_{0.0} {}

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> segment_values,
                           double value_at_pos_inf)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(segment_values)),
      at_pos_inf_(value_at_pos_inf) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "step function needs exactly one more segment value than "
                "breakpoints (got " +
                    std::to_string(values_.size()) + " values for " +
                    std::to_string(breakpoints_.size()) + " breakpoints)");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i])) {
      throw Error(ErrorCode::kInvalidArgument, "breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "breakpoints must be strictly increasing");
    }
  }
  auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  if (std::any_of(values_.begin(), values_.end(), bad) || bad(at_pos_inf_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "step function values must be finite and non-negative");
  }
}

StepFunction StepFunction::Constant(double value) {
  return StepFunction({}, {value}, value);
}

double StepFunction::Eval(const ExtendedLambda& lambda) const {
  switch (lambda.kind()) {
    case ExtendedLambda::Kind::kNegInf:
      return values_.front();
    case ExtendedLambda::Kind::kPosInf:
      return at_pos_inf_;
    case ExtendedLambda::Kind::kFinite:
      break;
  }
  // Number of breakpoints <= lambda is the index of the containing segment.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(),
                                   lambda.value());
  return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

ExtendedLambda StepFunction::SegmentStart(std::size_t j) const {
  if (j == 0) return ExtendedLambda::NegInf();
  return ExtendedLambda::Finite(breakpoints_.at(j - 1));
}

bool StepFunction::IsNonDecreasing() const {
  for (std::size_t j = 1; j < values_.size(); ++j) {
    if (values_[j] < values_[j - 1]) return false;
  }
  return at_pos_inf_ >= values_.back();
}

StepFunction Mean(std::span<const StepFunction> functions) {
  if (functions.empty()) {
    throw Error(ErrorCode::kEmptyCalibrationSet, "empty calibration set");
  }
  std::vector<double> merged;
  for (const auto& f : functions) {
    merged.insert(merged.end(), f.breakpoints().begin(),
                  f.breakpoints().end());
  }
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> sums(merged.size() + 1, 0.0);
  double sum_at_inf = 0.0;
  for (const auto& f : functions) {
    const auto& bps = f.breakpoints();
    const auto& vals = f.segment_values();
    // Walk the merged grid; `seg` tracks f's segment containing the current
    // merged segment start.
    std::size_t seg = 0;
    sums[0] += vals[0];
    for (std::size_t j = 0; j < merged.size(); ++j) {
      while (seg < bps.size() && bps[seg] <= merged[j]) ++seg;
      sums[j + 1] += vals[seg];
    }
    sum_at_inf += f.value_at_pos_inf();
  }
  const double n = static_cast<double>(functions.size());
  for (double& s : sums) s /= n;
  return StepFunction(std::move(merged), std::move(sums), sum_at_inf / n);
}

ExtendedLambda InfAtLeast(const StepFunction& f, double target) {
  const auto& vals = f.segment_values();
  if (vals[0] >= target) return ExtendedLambda::NegInf();
  for (std::size_t j = 1; j < vals.size(); ++j) {
    if (vals[j] >= target) {
      return ExtendedLambda::Finite(f.breakpoints()[j - 1]);
    }
  }
  return ExtendedLambda::PosInf();
}

double SupStrictlyBelow(const StepFunction& f, const ExtendedLambda& bound) {
  if (bound.is_neg_inf()) return 0.0;
  const auto& vals = f.segment_values();
  const auto& bps = f.breakpoints();
  // Segment 0 always contains points below any bound > -inf; segment j >= 1
  // does iff its start b_j lies strictly below the bound.
  double sup = vals[0];
  for (std::size_t j = 1; j < vals.size(); ++j) {
    if (!bound.is_pos_inf() && !(bps[j - 1] < bound.value())) break;
    sup = std::max(sup, vals[j]);
  }
  return sup;
}

}  // namespace confgen
