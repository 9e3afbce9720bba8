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

#ifndef CONFGEN_EXTENDED_LAMBDA_HPP_
#define CONFGEN_EXTENDED_LAMBDA_HPP_

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace confgen {

// A point of the extended real line [-inf, +inf]. The infinities are explicit
// variants rather than IEEE sentinels, so a finite value is always a finite
// double and the total order is NEG_INF < finite < POS_INF.
class ExtendedLambda {
 public:
  enum class Kind { kNegInf, kFinite, kPosInf };

  // Finite zero.
  constexpr ExtendedLambda() = default;

  static constexpr ExtendedLambda NegInf() {
    return ExtendedLambda(Kind::kNegInf, 0.0);
  }
  static constexpr ExtendedLambda PosInf() {
    return ExtendedLambda(Kind::kPosInf, 0.0);
  }
  // Throws Error(kInvalidArgument) for NaN or +-inf inputs.
  static ExtendedLambda Finite(double value);

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::kNegInf; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::kPosInf; }

  // Throws if not finite.
  double value() const;

  // Maps the infinities onto IEEE infinities. Lossy only in the sense that the
  // result is a plain double; used for averaging and CSV output.
  double to_double() const;

  std::strong_ordering operator<=>(const ExtendedLambda& other) const;
  bool operator==(const ExtendedLambda& other) const;

  // "-inf", "inf", or the shortest round-tripping decimal form.
  std::string ToString() const;

  // Accepts "-inf", "inf", "+inf" and any finite decimal. Returns nullopt on
  // malformed input.
  static std::optional<ExtendedLambda> Parse(std::string_view text);

 private:
  constexpr ExtendedLambda(Kind kind, double value)
      : kind_(kind), value_(value) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

// v > lambda in the extended order.
bool Exceeds(double v, const ExtendedLambda& lambda);
// v <= lambda in the extended order.
bool AtMost(double v, const ExtendedLambda& lambda);

// Shortest round-tripping decimal representation of a double.
std::string FormatDouble(double v);

}  // namespace confgen

#endif  // CONFGEN_EXTENDED_LAMBDA_HPP_
