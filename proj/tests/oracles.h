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


// Slow, obviously-correct reference implementations the library is checked
// against. Nothing here shares code with the code under test beyond the
// record types.

#ifndef RAPM_TESTS_ORACLES_H_
#define RAPM_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rapm/knowledge_store.h"

namespace rapm::oracle {

// --- Global alignment ----------------------------------------------------

struct AlignResult {
  int score = 0;
  int matches = 0;
  double identity = 0.0;
};

inline bool same_residue(char a, char b) { return a == b && a != 'X'; }

// Every alignment path, enumerated. Only for tiny inputs.
inline void enumerate_alignments(std::string_view a, std::string_view b, size_t i,
                                 size_t j, int score, int matches,
                                 std::pair<int, int>& best) {
  if (i == a.size() && j == b.size()) {
    best = std::max(best, {score, matches});
    return;
  }
  if (i < a.size() && j < b.size()) {
    bool m = same_residue(a[i], b[j]);
    enumerate_alignments(a, b, i + 1, j + 1, score + (m ? 1 : -1), matches + m, best);
  }
  if (i < a.size()) enumerate_alignments(a, b, i + 1, j, score - 1, matches, best);
  if (j < b.size()) enumerate_alignments(a, b, i, j + 1, score - 1, matches, best);
}

inline AlignResult exhaustive_alignment(std::string_view a, std::string_view b) {
  std::pair<int, int> best{std::numeric_limits<int>::min(), 0};
  enumerate_alignments(a, b, 0, 0, 0, 0, best);
  return {best.first, best.second,
          static_cast<double>(best.second) / static_cast<double>(std::max(a.size(), b.size()))};
}

// Textbook full-matrix Needleman-Wunsch for the optimal score, then a second
// pass that follows only score-optimal moves backwards from the corner and
// maximizes the matches collected on the way.
inline AlignResult needleman_wunsch(std::string_view a, std::string_view b) {
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> f(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) f[i][0] = -static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) f[0][j] = -static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int diag = f[i - 1][j - 1] + (same_residue(a[i - 1], b[j - 1]) ? 1 : -1);
      f[i][j] = std::max({diag, f[i - 1][j] - 1, f[i][j - 1] - 1});
    }
  }
  // best[i][j]: most matches on an optimal path from (0,0) to (i,j) that
  // stays on cells where f is attained.
  const int kNone = -1;
  std::vector<std::vector<int>> best(n + 1, std::vector<int>(m + 1, kNone));
  best[0][0] = 0;
  for (size_t i = 0; i <= n; ++i) {
    for (size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      int v = kNone;
      if (i > 0 && j > 0) {
        bool same = same_residue(a[i - 1], b[j - 1]);
        if (f[i - 1][j - 1] + (same ? 1 : -1) == f[i][j] && best[i - 1][j - 1] != kNone) {
          v = std::max(v, best[i - 1][j - 1] + (same ? 1 : 0));
        }
      }
      if (i > 0 && f[i - 1][j] - 1 == f[i][j] && best[i - 1][j] != kNone) {
        v = std::max(v, best[i - 1][j]);
      }
      if (j > 0 && f[i][j - 1] - 1 == f[i][j] && best[i][j - 1] != kNone) {
        v = std::max(v, best[i][j - 1]);
      }
      best[i][j] = v;
    }
  }
  AlignResult r;
  r.score = f[n][m];
  r.matches = best[n][m];
  r.identity = static_cast<double>(r.matches) / static_cast<double>(std::max(n, m));
  return r;
}

// --- k-mer prefilter -----------------------------------------------------

// All length-k substrings (or the '#'-padded sequence when shorter than k).
inline std::set<std::string> substrings(std::string_view s, int k) {
  std::set<std::string> out;
  if (s.size() < static_cast<size_t>(k)) {
    out.insert(std::string(s) + std::string(static_cast<size_t>(k) - s.size(), '#'));
    return out;
  }
  for (size_t i = 0; i + static_cast<size_t>(k) <= s.size(); ++i) {
    out.insert(std::string(s.substr(i, static_cast<size_t>(k))));
  }
  return out;
}

// (id, shared) for every record sharing a k-mer, by (shared desc, id asc).
inline std::vector<std::pair<std::string, int>> shared_kmer_ranking(
    const std::vector<std::pair<std::string, std::string>>& records,
    std::string_view query, int k) {
  std::set<std::string> q = substrings(query, k);
  std::vector<std::pair<std::string, int>> out;
  for (const auto& [id, seq] : records) {
    int shared = 0;
    for (const std::string& s : substrings(seq, k)) shared += q.count(s) ? 1 : 0;
    if (shared > 0) out.push_back({id, shared});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  return out;
}

// --- Embeddings ----------------------------------------------------------

inline double cosine(const std::vector<float>& a, const std::vector<float>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(dot / std::sqrt(na * nb));
}

// --- Fusion --------------------------------------------------------------

struct FusedItem {
  std::string annotation;
  std::string provenance;
  double score = 0.0;
};

// Scores every record and every annotation group of >= 2 fully embedded
// members directly, then ranks, deduplicates by annotation and cuts at K.
// `sim_seq` and `sim_emb` are injected so the caller decides the exact
// similarity arithmetic being compared.
template <typename SeqSim, typename EmbSim>
std::vector<FusedItem> exhaustive_fusion(const KnowledgeStore& store,
                                         std::string_view query,
                                         const std::optional<std::vector<float>>& emb,
                                         double alpha, size_t k, SeqSim sim_seq,
                                         EmbSim sim_emb) {
  const bool use_emb = emb.has_value() && store.embedded_count() > 0;
  const double a = use_emb ? alpha : 1.0;
  std::vector<FusedItem> all;
  for (const ProteinRecord& r : store.records()) {
    double s = sim_seq(query, r.sequence);
    double e = (use_emb && r.embedding) ? sim_emb(*emb, *r.embedding) : 0.0;
    all.push_back({r.annotation, r.id, a * s + (1.0 - a) * e});
  }
  if (use_emb) {
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
        for (size_t d = 0; d < sum.size(); ++d) sum[d] += (*r->embedding)[d];
      }
      if (!complete) continue;
      std::vector<float> mean(sum.size());
      for (size_t d = 0; d < sum.size(); ++d) {
        mean[d] = static_cast<float>(sum[d] / static_cast<double>(ids.size()));
      }
      all.push_back({annotation, "meta:" + annotation, (1.0 - a) * sim_emb(*emb, mean)});
    }
  }
  std::sort(all.begin(), all.end(), [](const FusedItem& x, const FusedItem& y) {
    return x.score != y.score ? x.score > y.score : x.provenance < y.provenance;
  });
  std::vector<FusedItem> out;
  std::unordered_set<std::string> seen;
  for (const FusedItem& item : all) {
    if (out.size() == k) break;
    if (seen.insert(item.annotation).second) out.push_back(item);
  }
  return out;
}

// --- Leakage -------------------------------------------------------------

// Top-1 neighbor by exhaustive alignment, ties to the smaller id.
template <typename SeqSim>
const ProteinRecord* nearest(const std::vector<ProteinRecord>& pool,
                             std::string_view query, SeqSim sim) {
  const ProteinRecord* best = nullptr;
  double best_sim = -1.0;
  for (const ProteinRecord& r : pool) {
    double s = sim(query, r.sequence);
    if (s > best_sim || (s == best_sim && best && r.id < best->id)) {
      best = &r;
      best_sim = s;
    }
  }
  return best;
}

// --- Clustering ----------------------------------------------------------

template <typename SeqSim>
std::vector<std::vector<std::string>> greedy_clusters(std::vector<ProteinRecord> records,
                                                      double threshold, SeqSim sim) {
  std::sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
    return x.sequence.size() != y.sequence.size() ? x.sequence.size() > y.sequence.size()
                                                  : x.id < y.id;
  });
  std::vector<std::vector<std::string>> clusters;
  std::vector<std::string> reps;
  for (const ProteinRecord& r : records) {
    size_t c = 0;
    while (c < reps.size() && sim(r.sequence, reps[c]) < threshold) ++c;
    if (c == reps.size()) {
      clusters.push_back({});
      reps.push_back(r.sequence);
    }
    clusters[c].push_back(r.id);
  }
  return clusters;
}

}  // namespace rapm::oracle

#endif  // RAPM_TESTS_ORACLES_H_
