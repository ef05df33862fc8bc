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

#ifndef RAPM_VECTOR_SIM_H_
#define RAPM_VECTOR_SIM_H_

#include <span>

namespace rapm {

// Cosine similarity accumulated in double. Throws Error(kDimensionMismatch)
// on differing or zero lengths and Error(kInvalidArgument) on an all-zero
// vector.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

// Cosine mapped affinely onto [0, 1]: (cos + 1) / 2.
double sim_emb(std::span<const float> a, std::span<const float> b);

// Building blocks shared with the HNSW index so that cached norms produce
// bit-identical similarities to the functions above.
double dot_product(std::span<const float> a, std::span<const float> b);
double squared_norm(std::span<const float> a);
double cosine_from_parts(double dot, double norm_sq_a, double norm_sq_b);
inline double cosine_to_sim(double cosine) { return (cosine + 1.0) / 2.0; }

}  // namespace rapm

#endif  // RAPM_VECTOR_SIM_H_
