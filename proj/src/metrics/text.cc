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

#include "rapm/metrics/text.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>

#include "rapm/error.h"

namespace rapm {
namespace {

// Decodes one UTF-8 code point at s[i]; malformed bytes decode as themselves.
uint32_t decode_at(std::string_view s, size_t i, size_t& width) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  size_t n = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
  if (i + n > s.size()) n = 1;
  if (n == 1) {
    width = 1;
    return c;
  }
  uint32_t cp = c & (0x7F >> n);
  for (size_t j = 1; j < n; ++j) {
    unsigned char cc = static_cast<unsigned char>(s[i + j]);
    if ((cc & 0xC0) != 0x80) {
      width = 1;
      return c;
    }
    cp = (cp << 6) | (cc & 0x3F);
  }
  width = n;
  return cp;
}

bool is_unicode_space(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

void push_token(std::string_view raw, TokenSeq& out) {
  size_t b = 0, e = raw.size();
  while (b < e && is_ascii_punct(raw[b])) ++b;
  while (e > b && is_ascii_punct(raw[e - 1])) --e;
  if (b == e) return;
  std::string tok(raw.substr(b, e - b));
  for (char& c : tok) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  out.push_back(std::move(tok));
}

using NgramCounts = std::map<std::span<const std::string>, size_t,
                             bool (*)(std::span<const std::string>,
                                      std::span<const std::string>)>;

bool span_less(std::span<const std::string> a, std::span<const std::string> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

NgramCounts count_ngrams(std::span<const std::string> tokens, size_t n) {
  NgramCounts counts(&span_less);
  for (size_t i = 0; i + n <= tokens.size(); ++i) ++counts[tokens.subspan(i, n)];
  return counts;
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  size_t start = 0, i = 0;
  while (i < text.size()) {
    size_t width = 1;
    uint32_t cp = decode_at(text, i, width);
    if (is_unicode_space(cp)) {
      if (i > start) push_token(text.substr(start, i - start), out);
      start = i + width;
    }
    i += width;
  }
  if (start < text.size()) push_token(text.substr(start), out);
  return out;
}

size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeLScore rouge_l(std::span<const std::string> candidate,
                    std::span<const std::string> reference) {
  RougeLScore s;
  s.lcs_length = lcs_length(candidate, reference);
  if (s.lcs_length == 0) return s;
  s.precision = static_cast<double>(s.lcs_length) / static_cast<double>(candidate.size());
  s.recall = static_cast<double>(s.lcs_length) / static_cast<double>(reference.size());
  s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

BleuScore bleu(std::span<const std::string> candidate,
               std::span<const TokenSeq> references,
               const BleuOptions& options) {
  const size_t order = options.max_order;
  if (order == 0) throw Error(ErrorCode::kInvalidArgument, "BLEU order must be >= 1");
  std::vector<double> weights = options.weights;
  if (weights.empty()) weights.assign(order, 1.0 / static_cast<double>(order));
  if (weights.size() != order) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(order) + " BLEU weights, got " +
                    std::to_string(weights.size()));
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative BLEU weight");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw Error(ErrorCode::kInvalidArgument, "BLEU weights sum to 0");

  BleuScore s;
  s.precisions.assign(order, 0.0);
  s.matches.assign(order, 0);
  s.totals.assign(order, 0);
  s.weights.assign(order, 0.0);
  s.candidate_length = candidate.size();

  // Closest reference length, shorter wins a tie.
  bool have_ref = false;
  for (const TokenSeq& ref : references) {
    size_t d = ref.size() > candidate.size() ? ref.size() - candidate.size()
                                             : candidate.size() - ref.size();
    size_t best = s.reference_length > candidate.size()
                      ? s.reference_length - candidate.size()
                      : candidate.size() - s.reference_length;
    if (!have_ref || d < best || (d == best && ref.size() < s.reference_length)) {
      s.reference_length = ref.size();
      have_ref = true;
    }
  }
  if (candidate.empty() || !have_ref) return s;

  for (size_t n = 1; n <= order; ++n) {
    if (candidate.size() < n) break;
    NgramCounts cand = count_ngrams(candidate, n);
    NgramCounts max_ref(&span_less);
    for (const TokenSeq& ref : references) {
      for (const auto& [gram, c] : count_ngrams(ref, n)) {
        size_t& m = max_ref[gram];
        m = std::max(m, c);
      }
    }
    size_t matched = 0;
    for (const auto& [gram, c] : cand) {
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) matched += std::min(c, it->second);
    }
    s.matches[n - 1] = matched;
    s.totals[n - 1] = candidate.size() - n + 1;
    s.precisions[n - 1] =
        static_cast<double>(matched) / static_cast<double>(s.totals[n - 1]);
  }

  double kept = 0.0;
  for (size_t n = 0; n < order; ++n) {
    if (s.totals[n] > 0) kept += weights[n];
  }
  if (kept <= 0.0) return s;
  for (size_t n = 0; n < order; ++n) {
    if (s.totals[n] > 0) s.weights[n] = weights[n] / kept;
  }

  s.brevity_penalty =
      s.candidate_length > s.reference_length
          ? 1.0
          : std::exp(1.0 - static_cast<double>(s.reference_length) /
                               static_cast<double>(s.candidate_length));

  if (s.matches[0] == 0) return s;
  double log_sum = 0.0;
  for (size_t n = 0; n < order; ++n) {
    if (s.totals[n] == 0 || s.weights[n] == 0.0) continue;
    double p = s.precisions[n];
    if (s.matches[n] == 0) {
      if (options.smoothing == Smoothing::kExact) return s;
      p = 1.0 / (2.0 * static_cast<double>(s.totals[n]));
    }
    log_sum += s.weights[n] * std::log(p);
  }
  s.value = std::clamp(s.brevity_penalty * std::exp(log_sum), 0.0, 1.0);
  return s;
}

BleuScore bleu(std::span<const std::string> candidate,
               std::span<const std::string> reference,
               const BleuOptions& options) {
  TokenSeq ref(reference.begin(), reference.end());
  return bleu(candidate, std::span<const TokenSeq>(&ref, 1), options);
}

}  // namespace rapm
