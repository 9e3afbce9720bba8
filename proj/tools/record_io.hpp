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

#ifndef CONFGEN_TOOLS_RECORD_IO_HPP_
#define CONFGEN_TOOLS_RECORD_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "confgen/calibrate.hpp"
#include "confgen/eval.hpp"

namespace confgen::cli {

// Reads JSONL records, one object per non-blank line:
//   {"id": str, "scores": [num], "direction": "up"|"down", "adm": [num],
//    "normalizer": num?, "dedup_keys": [str]?}
// Throws Error(kParse) naming `source` and the 1-based line number. The
// direction must be the same on every line.
std::vector<GenerationRecord> ReadRecords(std::istream& in,
                                          const std::string& source);
std::vector<GenerationRecord> ReadRecordsFile(const std::string& path);

nlohmann::json RecordToJson(const GenerationRecord& record);

// -inf / inf become the strings "-inf" / "inf"; finite values stay numbers.
nlohmann::json LambdaToJson(const ExtendedLambda& lambda);
// Accepts a number or one of the infinity strings.
ExtendedLambda LambdaFromJson(const nlohmann::json& value);

// {"correct": [[0|1]], "weights": [num] | [[num]]}
ForestData ReadForestFile(const std::string& path);

}  // namespace confgen::cli

#endif  // CONFGEN_TOOLS_RECORD_IO_HPP_
