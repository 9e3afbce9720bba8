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

#ifndef CONFGEN_SELECTION_HPP_
#define CONFGEN_SELECTION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confgen/extended_lambda.hpp"

namespace confgen {

// Score orientation. kUp: larger is better. kDown: smaller is better.
enum class Direction { kUp, kDown };

enum class Accum { kMax, kSum };

// Score-based selection functions. Every kind is right-continuous in lambda
// and has finitely many distinct outputs for a given sequence.
enum class SelectorKind {
  kRunningMax,        // prefix y_{:tau} with accum = max
  kRunningSum,        // prefix y_{:tau} with accum = sum
  kBelowLambda,       // {t : S_t (down) <= lambda}
  kAboveLambda,       // {t : S_t (up) > lambda}
  kRunningMaxSingle,  // {tau} with accum = max
  kSmallestSubsetSum  // shortest top-score prefix whose sum exceeds lambda
};

struct ScoreSequence {
  std::vector<double> scores;
  Direction direction = Direction::kUp;
};

struct SelectionSpec {
  SelectorKind kind = SelectorKind::kRunningMax;
  Direction direction = Direction::kUp;
  // Drop selected elements whose dedup key repeats an earlier selected one.
  bool dedup = false;
};

struct SelectionOutput {
  // 0-based, ascending, no repeats.
  std::vector<std::size_t> indices;
  // Elements consumed: tau for the running kinds, the full length otherwise.
  std::size_t pulled_count = 0;
  // Set only by streaming application when the pull cap was hit.
  bool truncated = false;

  bool operator==(const SelectionOutput&) const = default;
};

std::string_view SelectorName(SelectorKind kind);
std::optional<SelectorKind> ParseSelector(std::string_view name);
std::string_view DirectionName(Direction direction);
std::optional<Direction> ParseDirection(std::string_view name);

// The direction convention each kind expects (kDown only for kBelowLambda).
Direction RequiredDirection(SelectorKind kind);
// Accumulation rule behind the stopping time, for kinds that have one.
std::optional<Accum> AccumOf(SelectorKind kind);
// Kinds that can stop pulling elements at tau.
bool SupportsPartialGeneration(SelectorKind kind);
// Kinds whose nesting guarantee needs non-negative scores.
bool RequiresNonNegativeScores(SelectorKind kind);

// Builds a spec with the kind's conventional direction.
SelectionSpec MakeSelection(SelectorKind kind, bool dedup = false);

// Throws Error(kDirectionMismatch) when spec.direction disagrees with the
// kind's convention.
void Validate(const SelectionSpec& spec);
// Validate(spec) plus: non-empty, finite scores, direction matches, and
// non-negative scores where RequiresNonNegativeScores holds.
void Validate(const SelectionSpec& spec, const ScoreSequence& scores);

// Smallest t >= 1 with accum(S_1..S_t) > lambda, capped at |scores|.
// Returned as a count (1-based index of the stopping element).
std::size_t StoppingTime(std::span<const double> scores,
                         const ExtendedLambda& lambda, Accum accum);

// Evaluates C_lambda. `dedup_keys` is consulted only when spec.dedup is set
// and must then have one key per score.
SelectionOutput Select(const SelectionSpec& spec, const ScoreSequence& scores,
                       const ExtendedLambda& lambda,
                       std::span<const std::string> dedup_keys = {});

// The sorted set of finite lambdas at which Select changes output. Select is
// constant on (-inf, b_1) and on every [b_j, b_{j+1}).
std::vector<double> Breakpoints(const SelectionSpec& spec,
                                const ScoreSequence& scores,
                                std::span<const std::string> dedup_keys = {});

// Removes indices whose key already appeared among earlier kept indices.
std::vector<std::size_t> DedupIndices(std::span<const std::size_t> indices,
                                      std::span<const std::string> keys);

}  // namespace confgen

#endif  // CONFGEN_SELECTION_HPP_
