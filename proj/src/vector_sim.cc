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

#include "rapm/vector_sim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rapm/error.h"

namespace rapm {

double dot_product(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

double squared_norm(std::span<const float> a) { return dot_product(a, a); }

double cosine_from_parts(double dot, double norm_sq_a, double norm_sq_b) {
  double c = dot / (std::sqrt(norm_sq_a) * std::sqrt(norm_sq_b));
  return std::clamp(c, -1.0, 1.0);
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine: dimensions " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  double na = squared_norm(a);
  double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "cosine: zero vector");
  }
  return cosine_from_parts(dot_product(a, b), na, nb);
}

double sim_emb(std::span<const float> a, std::span<const float> b) {
  return cosine_to_sim(cosine_similarity(a, b));
}

}  // namespace rapm
