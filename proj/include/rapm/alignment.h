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

// Global alignment identity used as the sequence similarity channel.

#ifndef RAPM_ALIGNMENT_H_
#define RAPM_ALIGNMENT_H_

#include <cstdint>
#include <string_view>

namespace rapm {

struct AlignScore {
  // matches / max(|query|, |target|), in [0, 1].
  double identity = 0.0;
  uint32_t matches = 0;
  uint32_t aligned_length = 0;
  int32_t score = 0;
};

inline constexpr int kMatchScore = 1;
inline constexpr int kMismatchScore = -1;
inline constexpr int kGapScore = -1;

// True when residues a and b score as a match. X never matches.
inline bool residues_match(char a, char b) { return a == b && a != 'X'; }

// Needleman-Wunsch with match +1, mismatch -1, linear gap -1. Among all
// score-optimal alignments, the one with the most matches is reported, which
// keeps the result independent of traceback order and symmetric in its
// arguments. Inputs are expected to be normalized (uppercase). Throws
// Error(kInvalidArgument) on an empty input.
AlignScore align_identity(std::string_view query, std::string_view target);

}  // namespace rapm

#endif  // RAPM_ALIGNMENT_H_
