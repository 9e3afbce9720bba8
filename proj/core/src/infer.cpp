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

#include "confgen/infer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "confgen/error.hpp"

namespace confgen {

VectorSource VectorSource::FromScores(const std::vector<double>& scores) {
  std::vector<Element> elements;
  elements.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    elements.push_back({scores[i], std::nullopt, i});
  }
  return VectorSource(std::move(elements));
}

std::optional<Element> VectorSource::next() {
  if (pos_ >= elements_.size()) return std::nullopt;
  ++pulls_;
  return elements_[pos_++];
}

SelectionOutput Apply(const SelectionSpec& sel, const ExtendedLambda& lambda_hat,
                      const GenerationRecord& record) {
  Validate(record);
  return Select(sel, record.scores, lambda_hat, record.keys());
}

SelectionOutput StreamApply(const SelectionSpec& sel,
                            const ExtendedLambda& lambda_hat,
                            ElementSource& source, std::size_t max_pulls) {
  Validate(sel);
  if (!SupportsPartialGeneration(sel.kind)) {
    throw Error(ErrorCode::kStreamingUnsupported,
                std::string(SelectorName(sel.kind)) +
                    " needs the whole sequence and cannot stream");
  }
  if (max_pulls == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_pulls must be positive");
  }
  const Accum accum = *AccumOf(sel.kind);

  SelectionOutput out;
  std::vector<std::optional<std::string>> keys;
  double acc = 0.0;
  bool crossed = false;
  while (out.pulled_count < max_pulls) {
    std::optional<Element> e = source.next();
    if (!e) break;
    if (accum == Accum::kSum && e->score < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(SelectorName(sel.kind)) +
                      " requires non-negative scores");
    }
    if (out.pulled_count == 0) {
      acc = e->score;
    } else if (accum == Accum::kMax) {
      acc = std::max(acc, e->score);
    } else {
      acc += e->score;
    }
    keys.push_back(std::move(e->dedup_key));
    ++out.pulled_count;
    if (Exceeds(acc, lambda_hat)) {
      crossed = true;
      break;
    }
  }
  if (out.pulled_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "source produced no elements");
  }
  out.truncated = !crossed && out.pulled_count == max_pulls;

  if (sel.kind == SelectorKind::kRunningMaxSingle) {
    out.indices = {out.pulled_count - 1};
  } else {
    out.indices.resize(out.pulled_count);
    std::iota(out.indices.begin(), out.indices.end(), std::size_t{0});
  }
  if (sel.dedup) {
    // Elements without a key never count as duplicates.
    std::vector<std::size_t> kept;
    std::unordered_set<std::string> seen;
    for (std::size_t i : out.indices) {
      if (!keys[i] || seen.insert(*keys[i]).second) kept.push_back(i);
    }
    out.indices = std::move(kept);
  }
  return out;
}

}  // namespace confgen
