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

#include "rapm/seq_index.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "rapm/alignment.h"
#include "rapm/binary_io.h"
#include "rapm/error.h"
#include "rapm/knowledge_store.h"

namespace rapm {
namespace {

void check_k(int k) {
  if (k < kMinKmerLength || k > kMaxKmerLength) {
    throw Error(ErrorCode::kInvalidArgument,
                "k-mer length must be in [" + std::to_string(kMinKmerLength) +
                    ", " + std::to_string(kMaxKmerLength) + "], got " +
                    std::to_string(k));
  }
}

}  // namespace

std::vector<std::string> distinct_kmers(std::string_view sequence, int k) {
  const size_t kk = static_cast<size_t>(k);
  if (sequence.empty()) return {};
  if (sequence.size() < kk) {
    std::string padded(sequence);
    padded.resize(kk, kKmerPad);
    return {padded};
  }
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (size_t i = 0; i + kk <= sequence.size(); ++i) {
    std::string_view kmer = sequence.substr(i, kk);
    if (seen.insert(kmer).second) out.emplace_back(kmer);
  }
  return out;
}

SeqIndex SeqIndex::build(std::span<const SeqEntry> entries, int k) {
  check_k(k);
  SeqIndex index;
  index.k_ = k;

  std::vector<size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return entries[a].id < entries[b].id;
  });
  index.ids_.reserve(entries.size());
  index.sequences_.reserve(entries.size());
  for (size_t pos : order) {
    if (!index.ids_.empty() && index.ids_.back() == entries[pos].id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate id '" + entries[pos].id + "' in sequence index");
    }
    index.ids_.push_back(entries[pos].id);
    index.sequences_.push_back(normalize_sequence(entries[pos].sequence));
  }

  // Ordinals are visited ascending and k-mers are distinct per sequence, so
  // every posting list comes out sorted and duplicate-free.
  for (uint32_t ord = 0; ord < index.ids_.size(); ++ord) {
    for (std::string& kmer : distinct_kmers(index.sequences_[ord], k)) {
      index.postings_[std::move(kmer)].push_back(ord);
    }
  }
  return index;
}

SeqIndex SeqIndex::build(const KnowledgeStore& store, int k) {
  std::vector<SeqEntry> entries;
  entries.reserve(store.size());
  for (const ProteinRecord& r : store.records()) {
    entries.push_back({r.id, r.sequence});
  }
  return build(entries, k);
}

const std::string* SeqIndex::find_sequence(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return nullptr;
  return &sequences_[static_cast<size_t>(it - ids_.begin())];
}

std::span<const uint32_t> SeqIndex::postings(std::string_view kmer) const {
  auto it = postings_.find(std::string(kmer));
  if (it == postings_.end()) return {};
  return it->second;
}

std::vector<std::string> SeqIndex::kmers() const {
  std::vector<std::string> keys;
  keys.reserve(postings_.size());
  for (const auto& [key, _] : postings_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<KmerHit> SeqIndex::kmer_candidates(std::string_view query,
                                               size_t limit) const {
  if (query.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "kmer_candidates: empty query");
  }
  std::string normalized = normalize_sequence(query);
  std::vector<uint32_t> counts(ids_.size(), 0);
  std::vector<uint32_t> touched;
  for (const std::string& kmer : distinct_kmers(normalized, k_)) {
    for (uint32_t ord : postings(kmer)) {
      if (counts[ord]++ == 0) touched.push_back(ord);
    }
  }
  // Ordinal order is id order, so a stable sort on count keeps ids ascending.
  std::sort(touched.begin(), touched.end());
  std::stable_sort(touched.begin(), touched.end(),
                   [&](uint32_t a, uint32_t b) { return counts[a] > counts[b]; });
  if (touched.size() > limit) touched.resize(limit);

  std::vector<KmerHit> hits;
  hits.reserve(touched.size());
  for (uint32_t ord : touched) hits.push_back({ids_[ord], counts[ord]});
  return hits;
}

std::vector<SeqHit> SeqIndex::search(std::string_view query, size_t top_n,
                                     size_t prefilter_limit) const {
  if (top_n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "seq_search: top_n must be >= 1");
  }
  std::string normalized = normalize_sequence(query);
  std::vector<KmerHit> candidates = kmer_candidates(normalized, prefilter_limit);
  std::vector<SeqHit> hits;
  hits.reserve(candidates.size());
  for (KmerHit& c : candidates) {
    const std::string* target = find_sequence(c.id);
    hits.push_back({std::move(c.id), align_identity(normalized, *target).identity});
  }
  std::sort(hits.begin(), hits.end(), [](const SeqHit& a, const SeqHit& b) {
    if (a.sim_seq != b.sim_seq) return a.sim_seq > b.sim_seq;
    return a.id < b.id;
  });
  if (hits.size() > top_n) hits.resize(top_n);
  return hits;
}

void SeqIndex::serialize(ByteWriter& out) const {
  out.put_u8(static_cast<uint8_t>(k_));
  out.put_varint(ids_.size());
  for (size_t i = 0; i < ids_.size(); ++i) {
    out.put_string(ids_[i]);
    out.put_string(sequences_[i]);
  }
  std::vector<std::string> keys = kmers();
  out.put_varint(keys.size());
  for (const std::string& key : keys) {
    out.put_bytes(key);
    const std::vector<uint32_t>& list = postings_.at(key);
    out.put_varint(list.size());
    uint32_t prev = 0;
    for (uint32_t ord : list) {
      out.put_varint(ord - prev);
      prev = ord;
    }
  }
}

SeqIndex SeqIndex::deserialize(ByteReader& in) {
  SeqIndex index;
  index.k_ = in.get_u8();
  check_k(index.k_);
  uint64_t n = in.get_varint();
  for (uint64_t i = 0; i < n; ++i) {
    index.ids_.push_back(in.get_string());
    index.sequences_.push_back(in.get_string());
    if (i > 0 && !(index.ids_[i - 1] < index.ids_[i])) {
      throw Error(ErrorCode::kFormat, "sequence index ids not sorted");
    }
  }
  uint64_t num_keys = in.get_varint();
  for (uint64_t i = 0; i < num_keys; ++i) {
    std::string key(in.get_bytes(static_cast<size_t>(index.k_)));
    uint64_t len = in.get_varint();
    std::vector<uint32_t> list;
    list.reserve(static_cast<size_t>(std::min<uint64_t>(len, n)));
    uint64_t ord = 0;
    for (uint64_t j = 0; j < len; ++j) {
      uint64_t delta = in.get_varint();
      if (j > 0 && delta == 0) {
        throw Error(ErrorCode::kFormat, "duplicate posting for k-mer " + key);
      }
      ord += delta;
      if (ord >= n) throw Error(ErrorCode::kFormat, "posting out of range");
      list.push_back(static_cast<uint32_t>(ord));
    }
    index.postings_.emplace(std::move(key), std::move(list));
  }
  return index;
}

}  // namespace rapm
