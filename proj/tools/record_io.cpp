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

#include "record_io.hpp"

#include <fstream>
#include <istream>

#include "confgen/error.hpp"

namespace confgen::cli {

using nlohmann::json;

namespace {

[[noreturn]] void ParseFail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

std::vector<double> NumberArray(const json& j, const char* field,
                                const std::string& where) {
  if (!j.contains(field) || !j[field].is_array()) {
    ParseFail(where, std::string("missing array field '") + field + "'");
  }
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number()) {
      ParseFail(where, std::string("non-numeric entry in '") + field + "'");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<GenerationRecord> ReadRecords(std::istream& in,
                                          const std::string& source) {
  std::vector<GenerationRecord> records;
  std::optional<Direction> file_direction;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      ParseFail(where, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) ParseFail(where, "expected a JSON object");

    GenerationRecord r;
    r.id = j.contains("id") && j["id"].is_string()
               ? j["id"].get<std::string>()
               : std::to_string(records.size());
    r.scores.scores = NumberArray(j, "scores", where);
    r.adms.values = NumberArray(j, "adm", where);

    const std::string dir =
        j.contains("direction") && j["direction"].is_string()
            ? j["direction"].get<std::string>()
            : "";
    const auto direction = ParseDirection(dir);
    if (!direction) ParseFail(where, "direction must be \"up\" or \"down\"");
    if (file_direction && *file_direction != *direction) {
      ParseFail(where, "direction differs from earlier lines");
    }
    file_direction = direction;
    r.scores.direction = *direction;

    if (j.contains("normalizer") && !j["normalizer"].is_null()) {
      if (!j["normalizer"].is_number()) {
        ParseFail(where, "normalizer must be a number");
      }
      r.adms.normalizer = j["normalizer"].get<double>();
    }
    if (j.contains("dedup_keys") && !j["dedup_keys"].is_null()) {
      std::vector<std::string> keys;
      if (!j["dedup_keys"].is_array()) {
        ParseFail(where, "dedup_keys must be an array of strings");
      }
      for (const auto& k : j["dedup_keys"]) {
        if (!k.is_string()) ParseFail(where, "dedup_keys must be strings");
        keys.push_back(k.get<std::string>());
      }
      r.dedup_keys = std::move(keys);
    }
    try {
      Validate(r);
    } catch (const Error& e) {
      ParseFail(where, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<GenerationRecord> ReadRecordsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  return ReadRecords(in, path);
}

json RecordToJson(const GenerationRecord& record) {
  json j;
  j["id"] = record.id;
  j["scores"] = record.scores.scores;
  j["direction"] = std::string(DirectionName(record.scores.direction));
  j["adm"] = record.adms.values;
  if (record.adms.normalizer) j["normalizer"] = *record.adms.normalizer;
  if (record.dedup_keys) j["dedup_keys"] = *record.dedup_keys;
  return j;
}

json LambdaToJson(const ExtendedLambda& lambda) {
  if (lambda.is_finite()) return lambda.value();
  return lambda.ToString();
}

ExtendedLambda LambdaFromJson(const json& value) {
  if (value.is_number()) return ExtendedLambda::Finite(value.get<double>());
  if (value.is_string()) {
    if (auto parsed = ExtendedLambda::Parse(value.get<std::string>())) {
      return *parsed;
    }
  }
  throw Error(ErrorCode::kParse,
              "lambda must be a number, \"-inf\" or \"inf\"; got " +
                  value.dump());
}

ForestData ReadForestFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": malformed JSON: " + e.what());
  }
  ForestData data;
  try {
    data.correct = j.at("correct").get<std::vector<std::vector<int>>>();
    const json& w = j.at("weights");
    if (!w.empty() && w.front().is_array()) {
      data.weights = w.get<std::vector<std::vector<double>>>();
    } else {
      data.weights = {w.get<std::vector<double>>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  return data;
}

}  // namespace confgen::cli
