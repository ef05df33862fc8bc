// Copyright 2026 The RAPM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Tokenization, ROUGE-L and BLEU over word tokens.

#ifndef RAPM_METRICS_TEXT_H_
#define RAPM_METRICS_TEXT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rapm {

using TokenSeq = std::vector<std::string>;

// ASCII-lowercases, splits on Unicode whitespace and strips leading and
// trailing ASCII punctuation from every token. Internal punctuation stays, so
// "6,7-dimethyl" and "n/a" survive as single tokens. Tokens that are pure
// punctuation vanish.
TokenSeq tokenize(std::string_view text);

struct RougeLScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t lcs_length = 0;
};

size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);
RougeLScore rouge_l(std::span<const std::string> candidate,
                    std::span<const std::string> reference);

enum class Smoothing {
  // Any zero n-gram precision makes the score 0.
  kExact,
  // A zero count at order >= 2 becomes 1 / (2 * total).
  kEpsilon,
};

struct BleuOptions {
  size_t max_order = 4;
  // Empty means uniform 1/N.
  std::vector<double> weights;
  Smoothing smoothing = Smoothing::kEpsilon;
};

struct BleuScore {
  double value = 0.0;
  double brevity_penalty = 0.0;
  // Per order 1..N: clipped matches / candidate n-grams (0 when undefined).
  std::vector<double> precisions;
  std::vector<size_t> matches;
  std::vector<size_t> totals;
  // Effective weights; orders the candidate is too short for get 0 and the
  // rest are renormalized.
  std::vector<double> weights;
  size_t candidate_length = 0;
  size_t reference_length = 0;
  // Set by entity_bleu when nothing was extracted from the candidate.
  bool empty_candidate = false;
};

// Throws Error(kInvalidArgument) for max_order 0, a weight vector of the
// wrong length, or negative / all-zero weights.
BleuScore bleu(std::span<const std::string> candidate,
               std::span<const TokenSeq> references,
               const BleuOptions& options = {});
BleuScore bleu(std::span<const std::string> candidate,
               std::span<const std::string> reference,
               const BleuOptions& options = {});

}  // namespace rapm

#endif  // RAPM_METRICS_TEXT_H_
