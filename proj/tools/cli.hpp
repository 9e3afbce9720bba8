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

#ifndef CONFGEN_TOOLS_CLI_HPP_
#define CONFGEN_TOOLS_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "confgen/admissibility.hpp"
#include "confgen/eval.hpp"
#include "confgen/selection.hpp"

namespace confgen::cli {

// Exit statuses of the confgen tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAbstain = 3;

// Fully resolved run configuration. `effective` is the merged JSON it was
// built from (defaults < CONFGEN_SEED < config file < flags) and is echoed in
// every output.
struct RunConfig {
  SelectionSpec sel;
  AdmissibilitySpec adm;
  std::optional<double> gamma;
  std::vector<double> gamma_grid;
  std::uint64_t seed = 0;
  std::size_t reps = 100;
  std::size_t n_cal = 100;
  std::size_t n_test = 100;
  ProcessSpec process;
  ForestProcess forest;
  nlohmann::json effective;
};

nlohmann::json DefaultConfigJson();

// Validates cross-field rules and builds the typed configuration. Throws
// Error(kConfiguration) naming the violated rule.
RunConfig ResolveConfig(const nlohmann::json& effective);

// "0.5,0.6,0.7" or "default".
std::vector<double> ParseGammaGrid(const std::string& text);

// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string ConfigHash(const nlohmann::json& config);

// Entry point shared by the executable and the tests.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace confgen::cli

#endif  // CONFGEN_TOOLS_CLI_HPP_
