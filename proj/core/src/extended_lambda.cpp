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

#include "confgen/extended_lambda.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "confgen/error.hpp"

namespace confgen {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "INVALID_ARGUMENT";
    case ErrorCode::kEmptyCalibrationSet:
      return "EMPTY_CALIBRATION_SET";
    case ErrorCode::kDirectionMismatch:
      return "DIRECTION_MISMATCH";
    case ErrorCode::kConfiguration:
      return "CONFIGURATION";
    case ErrorCode::kStreamingUnsupported:
      return "STREAMING_UNSUPPORTED";
    case ErrorCode::kParse:
      return "PARSE";
  }
  return "UNKNOWN";
}

ExtendedLambda ExtendedLambda::Finite(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "finite lambda requires a finite value");
  }
  return ExtendedLambda(Kind::kFinite, value);
}

double ExtendedLambda::value() const {
  if (kind_ != Kind::kFinite) {
    throw Error(ErrorCode::kInvalidArgument,
                "value() called on infinite lambda " + ToString());
  }
  return value_;
}

double ExtendedLambda::to_double() const {
  switch (kind_) {
    case Kind::kNegInf:
      return -std::numeric_limits<double>::infinity();
    case Kind::kPosInf:
      return std::numeric_limits<double>::infinity();
    case Kind::kFinite:
      break;
  }
  return value_;
}

std::strong_ordering ExtendedLambda::operator<=>(
    const ExtendedLambda& other) const {
  if (kind_ != other.kind_) {
    return static_cast<int>(kind_) <=> static_cast<int>(other.kind_);
  }
  if (kind_ != Kind::kFinite || value_ == other.value_) {
    return std::strong_ordering::equal;
  }
  return value_ < other.value_ ? std::strong_ordering::less
                               : std::strong_ordering::greater;
}

bool ExtendedLambda::operator==(const ExtendedLambda& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

std::string ExtendedLambda::ToString() const {
  switch (kind_) {
    case Kind::kNegInf:
      return "-inf";
    case Kind::kPosInf:
      return "inf";
    case Kind::kFinite:
      break;
  }
  return FormatDouble(value_);
}

std::optional<ExtendedLambda> ExtendedLambda::Parse(std::string_view text) {
  if (text == "-inf") return NegInf();
  if (text == "inf" || text == "+inf") return PosInf();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    return std::nullopt;
  }
  return ExtendedLambda(Kind::kFinite, v);
}

bool Exceeds(double v, const ExtendedLambda& lambda) {
  switch (lambda.kind()) {
    case ExtendedLambda::Kind::kNegInf:
      return true;
    case ExtendedLambda::Kind::kPosInf:
      return false;
    case ExtendedLambda::Kind::kFinite:
      break;
  }
  return v > lambda.value();
}

bool AtMost(double v, const ExtendedLambda& lambda) {
  return !Exceeds(v, lambda);
}

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace confgen
