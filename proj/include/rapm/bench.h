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


// Out-of-distribution benchmark construction: cluster, split whole clusters,
// then move test records that can still look up their label in train.

#ifndef RAPM_BENCH_H_
#define RAPM_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rapm/knowledge_store.h"
#include "rapm/seq_index.h"

namespace rapm {

inline constexpr double kDefaultClusterThreshold = 0.3;
inline constexpr double kDefaultTestFraction = 0.2;
inline constexpr int kDefaultEliminationRounds = 2;
inline constexpr int kEliminationRoundCap = 5;

struct ClusterSet {
  // clusters[i][0] is the representative.
  std::vector<std::vector<std::string>> clusters;
  double threshold = kDefaultClusterThreshold;

  const std::string& representative(size_t i) const { return clusters[i][0]; }
  size_t member_count() const;
};

// Greedy representative clustering. Records are visited by length descending
// (ties by id) and join the first cluster whose representative reaches
// `threshold` identity; otherwise they start a new one. Throws
// Error(kInvalidArgument) unless 0 <= threshold <= 1.
ClusterSet cluster_sequences(std::span<const ProteinRecord> records,
                             double threshold = kDefaultClusterThreshold);

struct SplitResult {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  // Rounds that moved at least one record.
  int rounds_applied = 0;
  std::vector<std::vector<std::string>> moved_ids;
  // Leakage rate measured at the start of every executed round.
  std::vector<double> leakage_per_round;
  double final_leakage = 0.0;
  // Whether the final audit found no leaks.
  bool converged = false;
};

// Shuffles clusters with `seed` and fills the test side with whole clusters
// until it holds at least fraction * total members; a cluster larger than
// (1 - fraction) * total always goes to train. Ids come back sorted.
// Throws Error(kInvalidArgument) for fewer than 2 clusters or a fraction
// outside (0, 1), and Error(kFailedPrecondition) if train ends up empty.
SplitResult split_clusters(const ClusterSet& clusters,
                           double test_fraction = kDefaultTestFraction,
                           uint64_t seed = 42);

enum class MatchRule { kExact, kNormalized };
std::string_view match_rule_name(MatchRule rule);
MatchRule parse_match_rule(std::string_view name);

// Lowercase with whitespace runs collapsed to one space and the ends trimmed.
std::string normalize_annotation(std::string_view annotation);
bool annotations_match(std::string_view a, std::string_view b, MatchRule rule);

struct LeakageReport {
  double leakage_rate = 0.0;
  std::vector<std::string> leaking_ids;
  size_t test_count = 0;
  MatchRule match_rule = MatchRule::kNormalized;
};

struct AuditOptions {
  MatchRule rule = MatchRule::kNormalized;
  int kmer_length = kDefaultKmerLength;
  size_t prefilter_limit = kDefaultPrefilterLimit;
};

// A test record leaks when its top-1 sequence neighbor in `train` carries the
// same annotation. Throws Error(kInvalidArgument) on an empty test set.
LeakageReport audit_leakage(std::span<const ProteinRecord> train,
                            std::span<const ProteinRecord> test,
                            const AuditOptions& options = {});
LeakageReport audit_leakage(const KnowledgeStore& store,
                            std::span<const std::string> train_ids,
                            std::span<const std::string> test_ids,
                            const AuditOptions& options = {});

struct EliminationOptions {
  int rounds = kDefaultEliminationRounds;
  // Keep going past `rounds` until the audit is clean or the cap is hit.
  bool until_clean = true;
  int round_cap = kEliminationRoundCap;
  AuditOptions audit;
};

// Each round rebuilds the train index, finds every leaking test record and
// moves them to train together. Throws Error(kFailedPrecondition) if the test
// set would become empty.
SplitResult eliminate_leakage(const KnowledgeStore& store, SplitResult split,
                              const EliminationOptions& options = {});

std::string describe_split(const SplitResult& split);

}  // namespace rapm

#endif  // RAPM_BENCH_H_
