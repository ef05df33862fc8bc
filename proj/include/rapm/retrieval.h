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

// Fused top-K retrieval over the sequence and embedding channels.

#ifndef RAPM_RETRIEVAL_H_
#define RAPM_RETRIEVAL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rapm/seq_index.h"

namespace rapm {

struct KnowledgeBase;

enum class Confidence { kHigh, kMedium, kLow };
std::string_view confidence_name(Confidence c);

enum class PoolScope { kPerTask, kFullCorpus };
std::string_view pool_scope_name(PoolScope scope);
PoolScope parse_pool_scope(std::string_view name);

// Which similarity the confidence bucket is computed from.
enum class ConfidenceSource { kFusedScore, kSequenceSimilarity };

struct FusionConfig {
  double alpha = 0.5;
  size_t k = 5;
  size_t seq_prefilter_limit = kDefaultPrefilterLimit;
  size_t ef_search = 128;
  // Candidates taken from each channel before fusion.
  size_t candidate_limit = 64;
  double high_threshold = 0.90;
  double low_threshold = 0.60;
  PoolScope pool_scope = PoolScope::kFullCorpus;
  ConfidenceSource confidence_source = ConfidenceSource::kFusedScore;

  void validate() const;
};

struct RetrievedItem {
  std::string annotation;
  double score = 0.0;
  Confidence confidence = Confidence::kLow;
  // Record id, or "meta:<annotation>" for an aggregated node.
  std::string provenance;
  double sim_seq_part = 0.0;
  double sim_emb_part = 0.0;

  bool operator==(const RetrievedItem&) const = default;
};

inline constexpr std::string_view kMetaProvenancePrefix = "meta:";
std::string meta_provenance(std::string_view annotation);

struct RetrievalQuery {
  std::string sequence;
  std::optional<std::vector<float>> embedding;
  std::optional<std::string> task;
};

// alpha * sim_seq + (1 - alpha) * sim_emb. Throws Error(kInvalidArgument) if
// any input lies outside [0, 1].
double fuse_scores(double sim_seq, double sim_emb, double alpha);

// High above high_threshold, Medium in (low_threshold, high_threshold], Low
// otherwise.
Confidence quantize_confidence(double score, const FusionConfig& config);

// Unions the top `candidate_limit` hits of both channels, fills in whichever
// channel a candidate is missing (alignment for records, cosine for vectors,
// 0 for the sequence channel of meta nodes), fuses, keeps the best item per
// annotation and returns the first K by (score desc, provenance asc). Without
// a query embedding the ranking is sequence-only (alpha = 1).
std::vector<RetrievedItem> retrieve_topk(const RetrievalQuery& query,
                                         const KnowledgeBase& kb,
                                         const FusionConfig& config);

}  // namespace rapm

#endif  // RAPM_RETRIEVAL_H_
