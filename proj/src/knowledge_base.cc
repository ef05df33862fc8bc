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

#include "rapm/knowledge_base.h"

#include <fstream>
#include <iterator>

#include <spdlog/spdlog.h>
#include <zlib.h>

#include "rapm/binary_io.h"
#include "rapm/error.h"

namespace rapm {

AggregationResult aggregate_features(const KnowledgeStore& store) {
  AggregationResult result;
  for (const auto& [annotation, ids] : store.annotation_groups()) {
    if (ids.size() < 2) continue;
    std::vector<double> sum(store.dim(), 0.0);
    bool complete = true;
    for (const std::string& id : ids) {
      const ProteinRecord* r = store.find(id);
      if (!r->embedding) {
        complete = false;
        break;
      }
      for (size_t i = 0; i < sum.size(); ++i) sum[i] += (*r->embedding)[i];
    }
    if (!complete) {
      spdlog::warn("skipping meta-feature for '{}': a member has no embedding",
                   annotation);
      result.skipped.push_back(annotation);
      continue;
    }
    MetaFeature feature;
    feature.annotation = annotation;
    feature.member_count = static_cast<uint32_t>(ids.size());
    feature.vector.resize(sum.size());
    for (size_t i = 0; i < sum.size(); ++i) {
      feature.vector[i] = static_cast<float>(sum[i] / static_cast<double>(ids.size()));
    }
    result.features.push_back(std::move(feature));
  }
  return result;
}

std::vector<KeyedVector> embedding_nodes(const KnowledgeStore& store,
                                         const std::vector<MetaFeature>& meta) {
  std::vector<KeyedVector> nodes;
  for (const ProteinRecord& r : store.records()) {
    if (r.embedding) nodes.push_back({r.id, *r.embedding, false});
  }
  for (const MetaFeature& f : meta) {
    nodes.push_back({f.annotation, f.vector, true});
  }
  return nodes;
}

KnowledgeBase build_knowledge_base(KnowledgeStore store,
                                   const BuildOptions& options) {
  options.hnsw.validate();
  KnowledgeBase kb{std::move(store), {}, {}};
  kb.store.seal();
  kb.seq_index = SeqIndex::build(kb.store, options.kmer_length);
  AggregationResult meta = aggregate_features(kb.store);
  kb.emb_index = EmbIndex::build(embedding_nodes(kb.store, meta.features),
                                 options.hnsw);
  return kb;
}

namespace {

uint32_t crc32_of(std::string_view bytes) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

void put_section(ByteWriter& out, std::string_view payload) {
  out.put_u64(payload.size());
  out.put_bytes(payload);
  out.put_u32(crc32_of(payload));
}

std::string_view get_section(ByteReader& in, const char* name) {
  uint64_t len = in.get_u64();
  if (len > in.remaining()) {
    throw Error(ErrorCode::kFormat,
                std::string("truncated snapshot section ") + name);
  }
  std::string_view payload = in.get_bytes(static_cast<size_t>(len));
  uint32_t expected = in.get_u32();
  if (crc32_of(payload) != expected) {
    throw Error(ErrorCode::kChecksum,
                std::string("checksum mismatch in snapshot section ") + name);
  }
  return payload;
}

}  // namespace

std::string serialize_snapshot(const KnowledgeBase& kb) {
  ByteWriter out;
  out.put_bytes(kSnapshotMagic);
  out.put_u16(kSnapshotVersion);

  ByteWriter store;
  kb.store.serialize(store);
  put_section(out, store.bytes());

  ByteWriter seq;
  kb.seq_index.serialize(seq);
  put_section(out, seq.bytes());

  ByteWriter emb;
  kb.emb_index.serialize(emb);
  put_section(out, emb.bytes());
  return out.take();
}

KnowledgeBase parse_snapshot(std::string_view bytes) {
  ByteReader in(bytes, "snapshot");
  if (bytes.size() < kSnapshotMagic.size() ||
      in.get_bytes(kSnapshotMagic.size()) != kSnapshotMagic) {
    throw Error(ErrorCode::kFormat, "not a snapshot file (bad magic)");
  }
  uint16_t version = in.get_u16();
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "snapshot version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kSnapshotVersion) + ")");
  }
  std::string_view store_bytes = get_section(in, "store");
  std::string_view seq_bytes = get_section(in, "seq-index");
  std::string_view emb_bytes = get_section(in, "emb-index");
  in.expect_end();

  ByteReader store_in(store_bytes, "store section");
  KnowledgeStore store = KnowledgeStore::deserialize(store_in);
  store_in.expect_end();
  store.seal();

  ByteReader seq_in(seq_bytes, "seq-index section");
  SeqIndex seq_index = SeqIndex::deserialize(seq_in);
  seq_in.expect_end();

  ByteReader emb_in(emb_bytes, "emb-index section");
  EmbIndex emb_index = EmbIndex::deserialize(emb_in);
  emb_in.expect_end();
  if (!emb_index.empty() && emb_index.dim() != store.dim()) {
    throw Error(ErrorCode::kFormat, "snapshot embedding index dimension "
                                    "disagrees with the store");
  }
  return {std::move(store), std::move(seq_index), std::move(emb_index)};
}

void save_snapshot(const KnowledgeBase& kb, const std::filesystem::path& path) {
  std::string bytes = serialize_snapshot(kb);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

KnowledgeBase load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return parse_snapshot(bytes);
}

}  // namespace rapm
