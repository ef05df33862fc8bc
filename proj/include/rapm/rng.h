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

#ifndef RAPM_RNG_H_
#define RAPM_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace rapm {

// Seeded mt19937_64 with platform-independent mappings to reals and ranges.
// The standard distributions are implementation-defined, so they are avoided
// wherever a result must be reproducible across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }

  // Unbiased integer in [0, n). Requires n > 0.
  uint64_t uniform_index(uint64_t n);

  // Standard normal via Box-Muller.
  double gaussian();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rapm

#endif  // RAPM_RNG_H_
