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

#include "rapm/alignment.h"

#include <algorithm>
#include <vector>

#include "rapm/error.h"

namespace rapm {
namespace {

// DP cell ordered lexicographically by (score, matches).
struct Cell {
  int32_t score;
  int32_t matches;
};

inline bool better(const Cell& a, const Cell& b) {
  return a.score > b.score || (a.score == b.score && a.matches > b.matches);
}

inline Cell best_of(Cell a, Cell b, Cell c) {
  Cell best = a;
  if (better(b, best)) best = b;
  if (better(c, best)) best = c;
  return best;
}

}  // namespace

AlignScore align_identity(std::string_view query, std::string_view target) {
  if (query.empty() || target.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "align_identity: empty sequence");
  }
  const size_t n = query.size();
  const size_t m = target.size();

  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) {
    prev[j] = {static_cast<int32_t>(j) * kGapScore, 0};
  }
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {static_cast<int32_t>(i) * kGapScore, 0};
    const char qa = query[i - 1];
    for (size_t j = 1; j <= m; ++j) {
      const bool hit = residues_match(qa, target[j - 1]);
      Cell diag{prev[j - 1].score + (hit ? kMatchScore : kMismatchScore),
                prev[j - 1].matches + (hit ? 1 : 0)};
      Cell up{prev[j].score + kGapScore, prev[j].matches};
      Cell left{cur[j - 1].score + kGapScore, cur[j - 1].matches};
      cur[j] = best_of(diag, up, left);
    }
    std::swap(prev, cur);
  }

  const Cell end = prev[m];
  AlignScore out;
  out.score = end.score;
  out.matches = static_cast<uint32_t>(end.matches);
  // With unit scores, (score, matches) fix the mismatch and gap counts:
  // n + m = 2 (matches + mismatches) + gaps and
  // score = matches - mismatches - gaps.
  const int64_t mismatches = static_cast<int64_t>(n + m) -
                             3 * static_cast<int64_t>(end.matches) + end.score;
  const int64_t gaps = static_cast<int64_t>(end.matches) - mismatches - end.score;
  out.aligned_length =
      static_cast<uint32_t>(end.matches + mismatches + gaps);
  out.identity = static_cast<double>(out.matches) /
                 static_cast<double>(std::max(n, m));
  return out;
}

}  // namespace rapm
