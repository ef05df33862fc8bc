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

// k-mer inverted index over protein sequences with alignment rescoring.

#ifndef RAPM_SEQ_INDEX_H_
#define RAPM_SEQ_INDEX_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rapm {

class ByteReader;
class ByteWriter;
class KnowledgeStore;

struct SeqEntry {
  std::string id;
  std::string sequence;
};

struct KmerHit {
  std::string id;
  uint32_t shared_kmers = 0;

  bool operator==(const KmerHit&) const = default;
};

struct SeqHit {
  std::string id;
  double sim_seq = 0.0;

  bool operator==(const SeqHit&) const = default;
};

inline constexpr int kDefaultKmerLength = 5;
inline constexpr int kMinKmerLength = 2;
inline constexpr int kMaxKmerLength = 8;
inline constexpr size_t kDefaultPrefilterLimit = 256;
inline constexpr char kKmerPad = '#';

// The distinct k-mers of `sequence`. A sequence shorter than k yields one key:
// the sequence right-padded with '#' to length k.
std::vector<std::string> distinct_kmers(std::string_view sequence, int k);

class SeqIndex {
 public:
  SeqIndex() = default;

  // Throws Error(kInvalidArgument) unless 2 <= k <= 8, and on duplicate ids.
  static SeqIndex build(std::span<const SeqEntry> entries,
                        int k = kDefaultKmerLength);
  static SeqIndex build(const KnowledgeStore& store, int k = kDefaultKmerLength);

  int k() const { return k_; }
  size_t size() const { return ids_.size(); }
  size_t kmer_count() const { return postings_.size(); }

  // Ids ascending; posting lists refer to positions in this list.
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& sequence(uint32_t ordinal) const {
    return sequences_[ordinal];
  }
  const std::string* find_sequence(std::string_view id) const;

  std::span<const uint32_t> postings(std::string_view kmer) const;
  // All k-mer keys, sorted.
  std::vector<std::string> kmers() const;

  // Records sharing at least one k-mer with `query`, ordered by shared
  // distinct k-mer count descending then id ascending, truncated to `limit`.
  std::vector<KmerHit> kmer_candidates(std::string_view query,
                                       size_t limit) const;

  // Prefilters with kmer_candidates(query, prefilter_limit), rescores each
  // candidate by align_identity and returns the best `top_n` by
  // (sim_seq desc, id asc). Records sharing no k-mer with the query are never
  // returned.
  std::vector<SeqHit> search(std::string_view query, size_t top_n,
                             size_t prefilter_limit = kDefaultPrefilterLimit)
      const;

  void serialize(ByteWriter& out) const;
  static SeqIndex deserialize(ByteReader& in);

 private:
  int k_ = kDefaultKmerLength;
  std::vector<std::string> ids_;
  std::vector<std::string> sequences_;
  std::unordered_map<std::string, std::vector<uint32_t>> postings_;
};

}  // namespace rapm

#endif  // RAPM_SEQ_INDEX_H_
