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

#include "confgen/selection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>
#include <utility>

#include "confgen/error.hpp"

namespace confgen {
namespace {

constexpr std::array<std::pair<SelectorKind, std::string_view>, 6>
    kSelectorNames = {{
        {SelectorKind::kRunningMax, "running_max"},
        {SelectorKind::kRunningSum, "running_sum"},
        {SelectorKind::kBelowLambda, "below_lambda"},
        {SelectorKind::kAboveLambda, "above_lambda"},
        {SelectorKind::kRunningMaxSingle, "running_max_single"},
        {SelectorKind::kSmallestSubsetSum, "smallest_subset_sum"},
    }};

// Accumulated scores a_1..a_T with a_t = accum(S_1..S_t).
std::vector<double> Accumulate(std::span<const double> scores, Accum accum) {
  std::vector<double> out(scores.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (t == 0) {
      acc = scores[0];
    } else if (accum == Accum::kMax) {
      acc = std::max(acc, scores[t]);
    } else {
      acc += scores[t];
    }
    out[t] = acc;
  }
  return out;
}

// Stable descending order by score; ties keep ascending original index.
std::vector<std::size_t> DescendingOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

// Distinct values of the first T-1 accumulated scores. The last one never
// changes the output because tau is capped at T.
std::vector<double> CrossingValues(std::vector<double> accumulated) {
  if (!accumulated.empty()) accumulated.pop_back();
  std::sort(accumulated.begin(), accumulated.end());
  accumulated.erase(std::unique(accumulated.begin(), accumulated.end()),
                    accumulated.end());
  return accumulated;
}

std::vector<std::size_t> Prefix(std::size_t len) {
  std::vector<std::size_t> out(len);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

}  // namespace

std::string_view SelectorName(SelectorKind kind) {
  for (const auto& [k, name] : kSelectorNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<SelectorKind> ParseSelector(std::string_view name) {
  for (const auto& [k, n] : kSelectorNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::string_view DirectionName(Direction direction) {
  return direction == Direction::kUp ? "up" : "down";
}

std::optional<Direction> ParseDirection(std::string_view name) {
  if (name == "up") return Direction::kUp;
  if (name == "down") return Direction::kDown;
  return std::nullopt;
}

Direction RequiredDirection(SelectorKind kind) {
  return kind == SelectorKind::kBelowLambda ? Direction::kDown
                                            : Direction::kUp;
}

std::optional<Accum> AccumOf(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kRunningMax:
    case SelectorKind::kRunningMaxSingle:
      return Accum::kMax;
    case SelectorKind::kRunningSum:
    case SelectorKind::kSmallestSubsetSum:
      return Accum::kSum;
    case SelectorKind::kBelowLambda:
    case SelectorKind::kAboveLambda:
      break;
  }
  return std::nullopt;
}

bool SupportsPartialGeneration(SelectorKind kind) {
  return kind == SelectorKind::kRunningMax ||
         kind == SelectorKind::kRunningSum ||
         kind == SelectorKind::kRunningMaxSingle;
}

bool RequiresNonNegativeScores(SelectorKind kind) {
  return AccumOf(kind) == Accum::kSum;
}

SelectionSpec MakeSelection(SelectorKind kind, bool dedup) {
  return SelectionSpec{kind, RequiredDirection(kind), dedup};
}

void Validate(const SelectionSpec& spec) {
  if (spec.direction != RequiredDirection(spec.kind)) {
    throw Error(ErrorCode::kDirectionMismatch,
                std::string(SelectorName(spec.kind)) + " requires direction '" +
                    std::string(DirectionName(RequiredDirection(spec.kind))) +
                    "'");
  }
}

void Validate(const SelectionSpec& spec, const ScoreSequence& scores) {
  Validate(spec);
  if (scores.scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "score sequence is empty");
  }
  if (scores.direction != spec.direction) {
    throw Error(ErrorCode::kDirectionMismatch,
                "score direction '" +
                    std::string(DirectionName(scores.direction)) +
                    "' does not match selector " +
                    std::string(SelectorName(spec.kind)));
  }
  for (double s : scores.scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument, "scores must be finite");
    }
    if (RequiresNonNegativeScores(spec.kind) && s < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(SelectorName(spec.kind)) +
                      " requires non-negative scores");
    }
  }
}

std::size_t StoppingTime(std::span<const double> scores,
                         const ExtendedLambda& lambda, Accum accum) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "stopping time of an empty sequence");
  }
  double acc = 0.0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (t == 0) {
      acc = scores[0];
    } else if (accum == Accum::kMax) {
      acc = std::max(acc, scores[t]);
    } else {
      acc += scores[t];
    }
    if (Exceeds(acc, lambda)) return t + 1;
  }
  return scores.size();
}

std::vector<std::size_t> DedupIndices(std::span<const std::size_t> indices,
                                      std::span<const std::string> keys) {
  std::vector<std::size_t> kept;
  kept.reserve(indices.size());
  std::unordered_set<std::string_view> seen;
  for (std::size_t i : indices) {
    if (seen.insert(keys[i]).second) kept.push_back(i);
  }
  return kept;
}

SelectionOutput Select(const SelectionSpec& spec, const ScoreSequence& scores,
                       const ExtendedLambda& lambda,
                       std::span<const std::string> dedup_keys) {
  Validate(spec, scores);
  const auto& s = scores.scores;
  const std::size_t n = s.size();
  SelectionOutput out;
  out.pulled_count = n;

  switch (spec.kind) {
    case SelectorKind::kRunningMax:
    case SelectorKind::kRunningSum: {
      const std::size_t tau = StoppingTime(s, lambda, *AccumOf(spec.kind));
      out.indices = Prefix(tau);
      out.pulled_count = tau;
      break;
    }
    case SelectorKind::kRunningMaxSingle: {
      const std::size_t tau = StoppingTime(s, lambda, Accum::kMax);
      out.indices = {tau - 1};
      out.pulled_count = tau;
      break;
    }
    case SelectorKind::kBelowLambda:
      for (std::size_t t = 0; t < n; ++t) {
        if (AtMost(s[t], lambda)) out.indices.push_back(t);
      }
      break;
    case SelectorKind::kAboveLambda:
      for (std::size_t t = 0; t < n; ++t) {
        if (Exceeds(s[t], lambda)) out.indices.push_back(t);
      }
      break;
    case SelectorKind::kSmallestSubsetSum: {
      const auto order = DescendingOrder(s);
      std::vector<double> sorted(n);
      for (std::size_t t = 0; t < n; ++t) sorted[t] = s[order[t]];
      const std::size_t len = StoppingTime(sorted, lambda, Accum::kSum);
      out.indices.assign(order.begin(), order.begin() + len);
      std::sort(out.indices.begin(), out.indices.end());
      break;
    }
  }

  if (spec.dedup) {
    if (dedup_keys.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "dedup requires one key per element");
    }
    out.indices = DedupIndices(out.indices, dedup_keys);
  }
  return out;
}

std::vector<double> Breakpoints(const SelectionSpec& spec,
                                const ScoreSequence& scores,
                                std::span<const std::string> dedup_keys) {
  Validate(spec, scores);
  const auto& s = scores.scores;
  std::vector<double> candidates;
  switch (spec.kind) {
    case SelectorKind::kRunningMax:
    case SelectorKind::kRunningSum:
    case SelectorKind::kRunningMaxSingle:
      candidates = CrossingValues(Accumulate(s, *AccumOf(spec.kind)));
      break;
    case SelectorKind::kBelowLambda:
    case SelectorKind::kAboveLambda:
      candidates = s;
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()),
                       candidates.end());
      break;
    case SelectorKind::kSmallestSubsetSum: {
      const auto order = DescendingOrder(s);
      std::vector<double> sorted(s.size());
      for (std::size_t t = 0; t < s.size(); ++t) sorted[t] = s[order[t]];
      candidates = CrossingValues(Accumulate(sorted, Accum::kSum));
      break;
    }
  }
  if (!spec.dedup) return candidates;

  // Post-processing can merge adjacent outputs; keep only real changes.
  std::vector<double> kept;
  SelectionOutput prev =
      Select(spec, scores, ExtendedLambda::NegInf(), dedup_keys);
  for (double b : candidates) {
    SelectionOutput cur =
        Select(spec, scores, ExtendedLambda::Finite(b), dedup_keys);
    if (!(cur == prev)) kept.push_back(b);
    prev = std::move(cur);
  }
  return kept;
}

}  // namespace confgen
