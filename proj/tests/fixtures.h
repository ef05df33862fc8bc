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


// Synthetic corpora shared by the unit tests and the acceptance run.

#ifndef RAPM_TESTS_FIXTURES_H_
#define RAPM_TESTS_FIXTURES_H_

#include <string>
#include <vector>

#include "rapm/bench.h"
#include "rapm/knowledge_store.h"
#include "rapm/rng.h"
#include "test_util.h"

namespace rapm::testing {

// Train pool of `train_count` random proteins with unique annotations, and a
// test side where the first `leaks` records are ~10%-mutated copies of train
// records carrying the same annotation. The rest are unrelated.
struct LeakFixture {
  KnowledgeStore store{4};
  SplitResult split;
  std::vector<std::string> planted;
};

inline LeakFixture make_leak_fixture(size_t train_count, size_t test_count, size_t leaks,
                                     uint64_t seed, size_t length = 120) {
  LeakFixture f;
  Rng rng(seed);
  char id[32];
  std::vector<std::string> train_seqs;
  for (size_t i = 0; i < train_count; ++i) {
    std::snprintf(id, sizeof(id), "tr%04zu", i);
    std::string seq = random_protein(rng, length);
    train_seqs.push_back(seq);
    f.store.add({id, seq, "train annotation " + std::to_string(i), std::nullopt, std::nullopt});
    f.split.train_ids.push_back(id);
  }
  for (size_t i = 0; i < test_count; ++i) {
    std::snprintf(id, sizeof(id), "te%04zu", i);
    std::string seq;
    std::string ann;
    if (i < leaks) {
      size_t src = (i * 7) % train_count;
      seq = train_seqs[src];
      for (size_t p = 0; p < length; p += 10) mutate_at(seq, p + rng.uniform_index(10), rng);
      ann = "train annotation " + std::to_string(src);
      f.planted.push_back(id);
    } else {
      seq = random_protein(rng, length);
      ann = "test annotation " + std::to_string(i);
    }
    f.store.add({id, seq, ann, std::nullopt, std::nullopt});
    f.split.test_ids.push_back(id);
  }
  return f;
}

// A leaks through T in round 1; B's nearest train record is U (another
// label) until A joins train, so B only leaks in round 2.
struct CascadeFixture {
  KnowledgeStore store{4};
  SplitResult split;
};

inline CascadeFixture make_cascade_fixture(uint64_t seed) {
  Rng rng(seed);
  std::string s = random_protein(rng, 100);
  std::string a = s, b, u;
  for (size_t p = 0; p < 5; ++p) mutate_at(a, p, rng);
  b = a;
  for (size_t p = 5; p < 10; ++p) mutate_at(b, p, rng);
  u = b;
  for (size_t p = 10; p < 18; ++p) mutate_at(u, p, rng);
  CascadeFixture f;
  f.store.add({"T", s, "X", std::nullopt, std::nullopt});
  f.store.add({"U", u, "Y", std::nullopt, std::nullopt});
  f.store.add({"A", a, "X", std::nullopt, std::nullopt});
  f.store.add({"B", b, "X", std::nullopt, std::nullopt});
  f.store.add({"C", random_protein(rng, 100), "Z", std::nullopt, std::nullopt});
  f.split.train_ids = {"T", "U"};
  f.split.test_ids = {"A", "B", "C"};
  return f;
}

}  // namespace rapm::testing

#endif  // RAPM_TESTS_FIXTURES_H_
