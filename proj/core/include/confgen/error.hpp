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

#ifndef CONFGEN_ERROR_HPP_
#define CONFGEN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace confgen {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyCalibrationSet,
  kDirectionMismatch,
  kConfiguration,
  kStreamingUnsupported,
  kParse,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code is
// stable and is what the command line front-end maps to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace confgen

#endif  // CONFGEN_ERROR_HPP_
