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

#ifndef CONFGEN_STEP_FUNCTION_HPP_
#define CONFGEN_STEP_FUNCTION_HPP_

#include <span>
#include <vector>

#include "confgen/extended_lambda.hpp"

namespace confgen {

// Right-continuous, non-negative, piecewise-constant function on the extended
// real line.
//
// With breakpoints b_1 < ... < b_k the segments are (-inf, b_1), [b_1, b_2),
// ..., [b_k, +inf), so segment_values() has k + 1 entries. The value at the
// isolated point +inf is stored separately (value_at_pos_inf) because the
// abstention output need not agree with the last finite segment. -inf
// evaluates to the first segment.
class StepFunction {
 public:
  // Constant zero with value 0 at +inf.
  StepFunction();

  // Validates: breakpoints finite and strictly increasing, one more value than
  // breakpoints, all values finite and >= 0. Throws Error(kInvalidArgument).
  StepFunction(std::vector<double> breakpoints,
               std::vector<double> segment_values, double value_at_pos_inf);

  static StepFunction Constant(double value);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& segment_values() const { return values_; }
  double value_at_pos_inf() const { return at_pos_inf_; }
  std::size_t num_segments() const { return values_.size(); }

  double Eval(const ExtendedLambda& lambda) const;

  // Left endpoint of segment j: -inf for j == 0, otherwise b_j.
  ExtendedLambda SegmentStart(std::size_t j) const;

  // True when the finite segments are non-decreasing and the value at +inf is
  // at least the last finite segment.
  bool IsNonDecreasing() const;

  bool operator==(const StepFunction& other) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double at_pos_inf_ = 0.0;
};

// Pointwise arithmetic mean. Breakpoints are the sorted union of the inputs'
// breakpoints; each segment value is (sum over inputs in order) / n so the
// result is reproducible by any caller summing in the same order.
// Throws Error(kEmptyCalibrationSet) on an empty input.
StepFunction Mean(std::span<const StepFunction> functions);

// Smallest lambda in [-inf, +inf] with f(lambda) >= target, or +inf when no
// finite segment qualifies. Comparison is exact (no tolerance).
ExtendedLambda InfAtLeast(const StepFunction& f, double target);

// sup { f(lambda) : lambda < bound } over the extended line, with the empty
// supremum (bound == -inf) taken as 0.
double SupStrictlyBelow(const StepFunction& f, const ExtendedLambda& bound);

}  // namespace confgen

#endif  // CONFGEN_STEP_FUNCTION_HPP_
