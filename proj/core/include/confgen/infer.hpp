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

#ifndef CONFGEN_INFER_HPP_
#define CONFGEN_INFER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confgen/calibrate.hpp"
#include "confgen/extended_lambda.hpp"
#include "confgen/selection.hpp"

namespace confgen {

// One generated element as seen by the streaming path. Scores follow the
// "larger is better" convention of the partial-generation selectors.
struct Element {
  double score = 0.0;
  std::optional<std::string> dedup_key;
  std::uint64_t payload_ref = 0;  // opaque to the engine
};

// Pull interface over a generator. next() returns nullopt once exhausted and
// must keep doing so afterwards.
class ElementSource {
 public:
  virtual ~ElementSource() = default;
  virtual std::optional<Element> next() = 0;
};

// Replays a materialized sequence and counts pulls.
class VectorSource : public ElementSource {
 public:
  explicit VectorSource(std::vector<Element> elements)
      : elements_(std::move(elements)) {}
  // Elements built from plain scores, payload_ref = position.
  static VectorSource FromScores(const std::vector<double>& scores);

  std::optional<Element> next() override;
  std::size_t pulls() const { return pulls_; }

 private:
  std::vector<Element> elements_;
  std::size_t pos_ = 0;
  std::size_t pulls_ = 0;
};

inline constexpr std::size_t kDefaultMaxPulls = 1024;

// C_lambda_hat on a fully materialized record.
SelectionOutput Apply(const SelectionSpec& sel, const ExtendedLambda& lambda_hat,
                      const GenerationRecord& record);

// Pulls elements until accum(S_1..S_t) > lambda_hat, the source runs dry, or
// max_pulls elements were consumed (reported as truncated). Only the
// partial-generation kinds are accepted; others throw
// Error(kStreamingUnsupported).
SelectionOutput StreamApply(const SelectionSpec& sel,
                            const ExtendedLambda& lambda_hat,
                            ElementSource& source,
                            std::size_t max_pulls = kDefaultMaxPulls);

}  // namespace confgen

#endif  // CONFGEN_INFER_HPP_
