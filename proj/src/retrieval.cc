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

#include "rapm/retrieval.h"

#include <algorithm>
#include <atomic>
#include <map>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "rapm/alignment.h"
#include "rapm/error.h"
#include "rapm/knowledge_base.h"
#include "rapm/vector_sim.h"

namespace rapm {

std::string_view confidence_name(Confidence c) {
  switch (c) {
    case Confidence::kHigh: return "High";
    case Confidence::kMedium: return "Medium";
    case Confidence::kLow: return "Low";
  }
  return "Low";
}

std::string_view pool_scope_name(PoolScope scope) {
  return scope == PoolScope::kPerTask ? "per-task" : "full-corpus";
}

PoolScope parse_pool_scope(std::string_view name) {
  if (name == "per-task") return PoolScope::kPerTask;
  if (name == "full-corpus") return PoolScope::kFullCorpus;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown pool scope '" + std::string(name) +
                  "' (expected per-task or full-corpus)");
}

std::string meta_provenance(std::string_view annotation) {
  return std::string(kMetaProvenancePrefix) + std::string(annotation);
}

void FusionConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be in [0, 1]");
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (!(low_threshold >= 0.0 && low_threshold < high_threshold &&
        high_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "thresholds must satisfy 0 <= low < high <= 1");
  }
  if (seq_prefilter_limit < 1 || ef_search < 1 || candidate_limit < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "prefilter, ef_search and candidate limits must be >= 1");
  }
}

double fuse_scores(double sim_seq, double sim_emb, double alpha) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(sim_seq) || !in_unit(sim_emb) || !in_unit(alpha)) {
    throw Error(ErrorCode::kInvalidArgument,
                "fuse_scores: inputs must lie in [0, 1]");
  }
  return alpha * sim_seq + (1.0 - alpha) * sim_emb;
}

Confidence quantize_confidence(double score, const FusionConfig& config) {
  if (score > config.high_threshold) return Confidence::kHigh;
  if (score > config.low_threshold) return Confidence::kMedium;
  return Confidence::kLow;
}

namespace {

struct Candidate {
  std::string annotation;
  const ProteinRecord* record = nullptr;  // null for meta nodes
  std::optional<uint32_t> meta_node;
  std::optional<double> sim_seq;
  std::optional<double> sim_emb;
};

bool meta_in_scope(const KnowledgeStore& store, const std::string& annotation,
                   const std::optional<std::string>& task) {
  auto it = store.annotation_groups().find(annotation);
  if (it == store.annotation_groups().end()) return false;
  return std::all_of(it->second.begin(), it->second.end(),
                     [&](const std::string& id) { return store.find(id)->task == task; });
}

void warn_sequence_only() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true)) {
    spdlog::warn("no query embedding available; ranking by sequence "
                 "similarity only (alpha = 1)");
  }
}

}  // namespace

std::vector<RetrievedItem> retrieve_topk(const RetrievalQuery& query,
                                         const KnowledgeBase& kb,
                                         const FusionConfig& config) {
  config.validate();
  const KnowledgeStore& store = kb.store;
  if (store.empty()) return {};

  const std::string sequence = normalize_sequence(query.sequence);
  if (query.embedding && query.embedding->size() != store.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query embedding has dimension " +
                    std::to_string(query.embedding->size()) +
                    ", knowledge base has " + std::to_string(store.dim()));
  }
  const bool use_embedding = query.embedding && !kb.emb_index.empty();
  const double alpha = use_embedding ? config.alpha : 1.0;
  if (!use_embedding) warn_sequence_only();

  const bool per_task = config.pool_scope == PoolScope::kPerTask;
  auto record_in_scope = [&](const ProteinRecord& r) {
    return !per_task || r.task == query.task;
  };

  std::map<std::string, Candidate> candidates;
  for (const SeqHit& hit : kb.seq_index.search(sequence, config.candidate_limit,
                                               config.seq_prefilter_limit)) {
    const ProteinRecord* r = store.find(hit.id);
    if (!r || !record_in_scope(*r)) continue;
    Candidate& c = candidates[hit.id];
    c.annotation = r->annotation;
    c.record = r;
    c.sim_seq = hit.sim_seq;
  }
  if (use_embedding) {
    const size_t ef = std::max(config.ef_search, config.candidate_limit);
    for (const EmbHit& hit :
         kb.emb_index.search(*query.embedding, config.candidate_limit, ef)) {
      if (hit.meta) {
        if (per_task && !meta_in_scope(store, hit.key, query.task)) continue;
        Candidate& c = candidates[meta_provenance(hit.key)];
        c.annotation = hit.key;
        c.sim_seq = 0.0;
        c.sim_emb = hit.sim;
      } else {
        const ProteinRecord* r = store.find(hit.key);
        if (!r || !record_in_scope(*r)) continue;
        Candidate& c = candidates[hit.key];
        c.annotation = r->annotation;
        c.record = r;
        c.sim_emb = hit.sim;
      }
    }
  }

  std::vector<RetrievedItem> items;
  items.reserve(candidates.size());
  for (auto& [provenance, c] : candidates) {
    if (!c.sim_seq) c.sim_seq = align_identity(sequence, c.record->sequence).identity;
    if (!c.sim_emb) {
      c.sim_emb = (use_embedding && c.record->embedding)
                      ? sim_emb(*query.embedding, *c.record->embedding)
                      : 0.0;
    }
    RetrievedItem item;
    item.annotation = c.annotation;
    item.provenance = provenance;
    item.sim_seq_part = *c.sim_seq;
    item.sim_emb_part = *c.sim_emb;
    item.score = fuse_scores(item.sim_seq_part, item.sim_emb_part, alpha);
    items.push_back(std::move(item));
  }
  std::sort(items.begin(), items.end(),
            [](const RetrievedItem& a, const RetrievedItem& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.provenance < b.provenance;
            });

  std::vector<RetrievedItem> out;
  std::unordered_set<std::string> seen;
  for (RetrievedItem& item : items) {
    if (out.size() == config.k) break;
    if (!seen.insert(item.annotation).second) continue;
    const double basis = config.confidence_source == ConfidenceSource::kFusedScore
                             ? item.score
                             : item.sim_seq_part;
    item.confidence = quantize_confidence(basis, config);
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace rapm
