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

// The dual-indexed knowledge base: a sealed store plus its sequence index and
// embedding index (record vectors and aggregated annotation vectors), with
// snapshot persistence.

#ifndef RAPM_KNOWLEDGE_BASE_H_
#define RAPM_KNOWLEDGE_BASE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rapm/hnsw.h"
#include "rapm/knowledge_store.h"
#include "rapm/seq_index.h"

namespace rapm {

// Mean-pooled embedding of every record sharing one annotation.
struct MetaFeature {
  std::string annotation;
  std::vector<float> vector;
  uint32_t member_count = 0;
};

struct AggregationResult {
  std::vector<MetaFeature> features;
  // Annotations with >= 2 members where some member has no embedding.
  std::vector<std::string> skipped;
};

// One MetaFeature per annotation with at least two members, in annotation
// order. The mean is accumulated in double.
AggregationResult aggregate_features(const KnowledgeStore& store);

// Record vectors in store order followed by the meta vectors.
std::vector<KeyedVector> embedding_nodes(const KnowledgeStore& store,
                                         const std::vector<MetaFeature>& meta);

struct BuildOptions {
  int kmer_length = kDefaultKmerLength;
  HnswParams hnsw;
};

struct KnowledgeBase {
  KnowledgeStore store;
  SeqIndex seq_index;
  EmbIndex emb_index;
};

// Aggregates features, builds both indices and seals the store.
KnowledgeBase build_knowledge_base(KnowledgeStore store,
                                   const BuildOptions& options);

// Snapshot file: "RAPMSNAP" | u16 version | three sections (store,
// seq-index, emb-index), each as u64 length | payload | u32 CRC32(payload).
inline constexpr std::string_view kSnapshotMagic = "RAPMSNAP";
inline constexpr uint16_t kSnapshotVersion = 1;

std::string serialize_snapshot(const KnowledgeBase& kb);
KnowledgeBase parse_snapshot(std::string_view bytes);

void save_snapshot(const KnowledgeBase& kb, const std::filesystem::path& path);
KnowledgeBase load_snapshot(const std::filesystem::path& path);

}  // namespace rapm

#endif  // RAPM_KNOWLEDGE_BASE_H_
