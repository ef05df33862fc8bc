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

// Hierarchical navigable small world graph over embedding vectors.
//
// Nodes are inserted in the given order. Each node draws its top layer from
// floor(-ln(u) * m_L) with m_L = 1/ln(M), greedily descends from the entry
// point through the layers above it, and at each of its own layers links to
// the closest ef_construction beam candidates up to that layer's capacity (M,
// or 2M on layer 0). Reverse links that push a node over capacity are pruned
// back to the closest. No diversity heuristic.
// Distance is 1 - cosine; reported similarity is sim_emb = (cosine + 1) / 2.

#ifndef RAPM_HNSW_H_
#define RAPM_HNSW_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rapm {

class ByteReader;
class ByteWriter;

struct HnswParams {
  uint32_t m = 16;
  uint32_t ef_construction = 200;
  uint32_t ef_search = 128;
  uint64_t seed = 42;

  // m_L = 1 / ln(M).
  double level_factor() const;
  uint32_t max_links(int layer) const { return layer == 0 ? 2 * m : m; }

  // M >= 2, ef_construction >= M, ef_search >= 1.
  void validate() const;

  bool operator==(const HnswParams&) const = default;
};

// floor(-ln(draw) * level_factor). Throws unless 0 < draw <= 1.
int assign_layer(double draw, double level_factor);

struct KeyedVector {
  std::string key;
  std::vector<float> vector;
  // Marks an aggregated annotation vector rather than a record.
  bool meta = false;
};

struct EmbHit {
  std::string key;
  double sim = 0.0;
  bool meta = false;

  bool operator==(const EmbHit&) const = default;
};

class EmbIndex {
 public:
  EmbIndex() = default;

  // hnsw_build. Throws Error(kDimensionMismatch) if vectors differ in length
  // and Error(kInvalidArgument) on a zero vector.
  static EmbIndex build(std::span<const KeyedVector> vectors,
                        const HnswParams& params);

  // At most k hits sorted by (sim desc, key asc). The layer-0 beam width is
  // max(ef_search, k). An empty index returns no hits.
  std::vector<EmbHit> search(std::span<const float> query, size_t k,
                             size_t ef_search) const;
  std::vector<EmbHit> search(std::span<const float> query, size_t k) const {
    return search(query, k, params_.ef_search);
  }

  const HnswParams& params() const { return params_; }
  size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  uint32_t dim() const { return dim_; }
  size_t meta_count() const;

  const std::string& key(uint32_t node) const { return keys_[node]; }
  bool is_meta(uint32_t node) const { return meta_[node] != 0; }
  int layer(uint32_t node) const { return static_cast<int>(links_[node].size()) - 1; }
  std::span<const float> vector(uint32_t node) const {
    return {vectors_.data() + static_cast<size_t>(node) * dim_, dim_};
  }
  std::span<const uint32_t> neighbors(uint32_t node, int layer) const {
    return links_[node][static_cast<size_t>(layer)];
  }
  std::optional<uint32_t> find(std::string_view key, bool meta) const;

  uint32_t entry_point() const { return entry_point_; }
  int max_layer() const { return max_layer_; }

  void serialize(ByteWriter& out) const;
  static EmbIndex deserialize(ByteReader& in);

 private:
  struct Candidate {
    double distance;
    uint32_t node;
    bool operator<(const Candidate& o) const {
      return distance < o.distance || (distance == o.distance && node < o.node);
    }
    bool operator>(const Candidate& o) const { return o < *this; }
  };

  double distance_to(std::span<const float> query, double query_norm_sq,
                     uint32_t node) const;
  void insert(uint32_t node, int level);
  // Best-first beam search on one layer; result sorted by distance ascending.
  std::vector<Candidate> search_layer(std::span<const float> query,
                                      double query_norm_sq,
                                      const std::vector<Candidate>& entries,
                                      size_t ef, int layer) const;
  void shrink_links(uint32_t node, int layer);

  HnswParams params_;
  uint32_t dim_ = 0;
  std::vector<std::string> keys_;
  std::vector<uint8_t> meta_;
  std::vector<float> vectors_;
  std::vector<double> norms_sq_;
  // links_[node][layer] -> neighbor nodes.
  std::vector<std::vector<std::vector<uint32_t>>> links_;
  uint32_t entry_point_ = 0;
  int max_layer_ = -1;
};

// Exact ranking by sim_emb, (sim desc, key asc), truncated to k.
std::vector<EmbHit> brute_force_knn(std::span<const KeyedVector> vectors,
                                    std::span<const float> query, size_t k);

}  // namespace rapm

#endif  // RAPM_HNSW_H_
