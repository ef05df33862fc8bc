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

#include "rapm/hnsw.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "rapm/binary_io.h"
#include "rapm/error.h"
#include "rapm/rng.h"
#include "rapm/vector_sim.h"

namespace rapm {

double HnswParams::level_factor() const {
  return 1.0 / std::log(static_cast<double>(m));
}

void HnswParams::validate() const {
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "HNSW M must be >= 2");
  if (ef_construction < m) {
    throw Error(ErrorCode::kInvalidArgument, "HNSW ef_construction must be >= M");
  }
  if (ef_search < 1) {
    throw Error(ErrorCode::kInvalidArgument, "HNSW ef_search must be >= 1");
  }
}

int assign_layer(double draw, double level_factor) {
  if (!(draw > 0.0 && draw <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "layer draw must be in (0, 1], got " + std::to_string(draw));
  }
  return static_cast<int>(std::floor(-std::log(draw) * level_factor));
}

size_t EmbIndex::meta_count() const {
  return static_cast<size_t>(std::count(meta_.begin(), meta_.end(), 1));
}

std::optional<uint32_t> EmbIndex::find(std::string_view key, bool meta) const {
  for (uint32_t i = 0; i < keys_.size(); ++i) {
    if (keys_[i] == key && is_meta(i) == meta) return i;
  }
  return std::nullopt;
}

double EmbIndex::distance_to(std::span<const float> query, double query_norm_sq,
                             uint32_t node) const {
  return 1.0 - cosine_from_parts(dot_product(query, vector(node)),
                                 query_norm_sq, norms_sq_[node]);
}

std::vector<EmbIndex::Candidate> EmbIndex::search_layer(
    std::span<const float> query, double query_norm_sq,
    const std::vector<Candidate>& entries, size_t ef, int layer) const {
  std::vector<bool> visited(keys_.size(), false);
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> frontier;
  std::priority_queue<Candidate> best;  // furthest on top
  for (const Candidate& e : entries) {
    if (visited[e.node]) continue;
    visited[e.node] = true;
    frontier.push(e);
    best.push(e);
    if (best.size() > ef) best.pop();
  }
  while (!frontier.empty()) {
    Candidate current = frontier.top();
    if (best.size() >= ef && best.top() < current) break;
    frontier.pop();
    for (uint32_t next : neighbors(current.node, layer)) {
      if (visited[next]) continue;
      visited[next] = true;
      Candidate c{distance_to(query, query_norm_sq, next), next};
      if (best.size() < ef || c < best.top()) {
        frontier.push(c);
        best.push(c);
        if (best.size() > ef) best.pop();
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void EmbIndex::shrink_links(uint32_t node, int layer) {
  std::vector<uint32_t>& list = links_[node][static_cast<size_t>(layer)];
  std::vector<Candidate> scored;
  scored.reserve(list.size());
  for (uint32_t other : list) {
    scored.push_back({distance_to(vector(node), norms_sq_[node], other), other});
  }
  std::sort(scored.begin(), scored.end());
  scored.resize(params_.max_links(layer));
  list.clear();
  for (const Candidate& c : scored) list.push_back(c.node);
}

void EmbIndex::insert(uint32_t node, int level) {
  if (max_layer_ < 0) {
    entry_point_ = node;
    max_layer_ = level;
    return;
  }
  std::span<const float> q = vector(node);
  const double qn = norms_sq_[node];
  std::vector<Candidate> entries{{distance_to(q, qn, entry_point_), entry_point_}};
  for (int l = max_layer_; l > level; --l) {
    entries = search_layer(q, qn, entries, 1, l);
  }
  for (int l = std::min(level, max_layer_); l >= 0; --l) {
    std::vector<Candidate> found =
        search_layer(q, qn, entries, params_.ef_construction, l);
    std::vector<uint32_t>& own = links_[node][static_cast<size_t>(l)];
    for (const Candidate& c : found) {
      if (own.size() == params_.max_links(l)) break;
      own.push_back(c.node);
    }
    for (uint32_t neighbor : own) {
      auto& back = links_[neighbor][static_cast<size_t>(l)];
      back.push_back(node);
      if (back.size() > params_.max_links(l)) shrink_links(neighbor, l);
    }
    entries = std::move(found);
  }
  if (level > max_layer_) {
    entry_point_ = node;
    max_layer_ = level;
  }
}

EmbIndex EmbIndex::build(std::span<const KeyedVector> vectors,
                         const HnswParams& params) {
  params.validate();
  EmbIndex index;
  index.params_ = params;
  if (vectors.empty()) return index;

  index.dim_ = static_cast<uint32_t>(vectors.front().vector.size());
  if (index.dim_ == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "HNSW: zero-length vector");
  }
  const size_t n = vectors.size();
  index.keys_.reserve(n);
  index.meta_.reserve(n);
  index.vectors_.reserve(n * index.dim_);
  index.norms_sq_.reserve(n);
  for (const KeyedVector& kv : vectors) {
    if (kv.vector.size() != index.dim_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "HNSW: vector '" + kv.key + "' has dimension " +
                      std::to_string(kv.vector.size()) + ", expected " +
                      std::to_string(index.dim_));
    }
    double norm_sq = squared_norm(kv.vector);
    if (norm_sq == 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "HNSW: zero vector for '" + kv.key + "'");
    }
    index.keys_.push_back(kv.key);
    index.meta_.push_back(kv.meta ? 1 : 0);
    index.vectors_.insert(index.vectors_.end(), kv.vector.begin(), kv.vector.end());
    index.norms_sq_.push_back(norm_sq);
  }

  Rng rng(params.seed);
  const double level_factor = params.level_factor();
  index.links_.resize(n);
  for (uint32_t node = 0; node < n; ++node) {
    int level = assign_layer(rng.uniform_open_closed(), level_factor);
    index.links_[node].resize(static_cast<size_t>(level) + 1);
    index.insert(node, level);
  }
  return index;
}

std::vector<EmbHit> EmbIndex::search(std::span<const float> query, size_t k,
                                     size_t ef_search) const {
  if (empty() || k == 0) return {};
  if (query.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dimension " + std::to_string(query.size()) +
                    " does not match index dimension " + std::to_string(dim_));
  }
  const double qn = squared_norm(query);
  if (qn == 0.0) throw Error(ErrorCode::kInvalidArgument, "zero query vector");

  std::vector<Candidate> entries{{distance_to(query, qn, entry_point_), entry_point_}};
  for (int l = max_layer_; l > 0; --l) {
    entries = search_layer(query, qn, entries, 1, l);
  }
  std::vector<Candidate> found =
      search_layer(query, qn, entries, std::max(ef_search, k), 0);

  std::vector<EmbHit> hits;
  hits.reserve(found.size());
  for (const Candidate& c : found) {
    double cosine =
        cosine_from_parts(dot_product(query, vector(c.node)), qn, norms_sq_[c.node]);
    hits.push_back({keys_[c.node], cosine_to_sim(cosine), is_meta(c.node)});
  }
  std::sort(hits.begin(), hits.end(), [](const EmbHit& a, const EmbHit& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.key != b.key) return a.key < b.key;
    return a.meta < b.meta;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

void EmbIndex::serialize(ByteWriter& out) const {
  out.put_u32(params_.m);
  out.put_u32(params_.ef_construction);
  out.put_u32(params_.ef_search);
  out.put_u64(params_.seed);
  out.put_u32(dim_);
  out.put_varint(keys_.size());
  out.put_varint(entry_point_);
  out.put_varint(static_cast<uint64_t>(max_layer_ + 1));
  for (uint32_t node = 0; node < keys_.size(); ++node) {
    out.put_string(keys_[node]);
    out.put_u8(meta_[node]);
    out.put_varint(static_cast<uint64_t>(layer(node)));
    out.put_floats(vector(node));
  }
  for (uint32_t node = 0; node < keys_.size(); ++node) {
    for (const std::vector<uint32_t>& list : links_[node]) {
      out.put_varint(list.size());
      for (uint32_t neighbor : list) out.put_varint(neighbor);
    }
  }
}

EmbIndex EmbIndex::deserialize(ByteReader& in) {
  EmbIndex index;
  index.params_.m = in.get_u32();
  index.params_.ef_construction = in.get_u32();
  index.params_.ef_search = in.get_u32();
  index.params_.seed = in.get_u64();
  index.params_.validate();
  index.dim_ = in.get_u32();
  const uint64_t n = in.get_varint();
  index.entry_point_ = static_cast<uint32_t>(in.get_varint());
  index.max_layer_ = static_cast<int>(in.get_varint()) - 1;
  if (n > 0 && (index.dim_ == 0 || index.entry_point_ >= n)) {
    throw Error(ErrorCode::kFormat, "corrupt HNSW header");
  }
  index.links_.resize(n);
  for (uint64_t node = 0; node < n; ++node) {
    index.keys_.push_back(in.get_string());
    index.meta_.push_back(in.get_u8());
    uint64_t layer = in.get_varint();
    if (static_cast<int64_t>(layer) > index.max_layer_) {
      throw Error(ErrorCode::kFormat, "HNSW node above max layer");
    }
    index.links_[node].resize(layer + 1);
    size_t offset = index.vectors_.size();
    index.vectors_.resize(offset + index.dim_);
    in.get_floats(std::span<float>(index.vectors_.data() + offset, index.dim_));
    index.norms_sq_.push_back(squared_norm(index.vector(static_cast<uint32_t>(node))));
  }
  for (uint64_t node = 0; node < n; ++node) {
    for (size_t l = 0; l < index.links_[node].size(); ++l) {
      uint64_t count = in.get_varint();
      if (count > index.params_.max_links(static_cast<int>(l))) {
        throw Error(ErrorCode::kFormat, "HNSW adjacency over capacity");
      }
      for (uint64_t j = 0; j < count; ++j) {
        uint64_t neighbor = in.get_varint();
        if (neighbor >= n || index.links_[neighbor].size() <= l) {
          throw Error(ErrorCode::kFormat, "HNSW link to invalid node");
        }
        index.links_[node][l].push_back(static_cast<uint32_t>(neighbor));
      }
    }
  }
  if (n > 0 && index.layer(index.entry_point_) != index.max_layer_) {
    throw Error(ErrorCode::kFormat, "HNSW entry point is not on the top layer");
  }
  return index;
}

std::vector<EmbHit> brute_force_knn(std::span<const KeyedVector> vectors,
                                    std::span<const float> query, size_t k) {
  std::vector<EmbHit> hits;
  hits.reserve(vectors.size());
  for (const KeyedVector& kv : vectors) {
    hits.push_back({kv.key, sim_emb(query, kv.vector), kv.meta});
  }
  std::sort(hits.begin(), hits.end(), [](const EmbHit& a, const EmbHit& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    if (a.key != b.key) return a.key < b.key;
    return a.meta < b.meta;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace rapm
