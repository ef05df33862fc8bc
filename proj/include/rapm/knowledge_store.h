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

// The protein-annotation corpus: records, annotation groups and embeddings.

#ifndef RAPM_KNOWLEDGE_STORE_H_
#define RAPM_KNOWLEDGE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rapm {

class ByteReader;
class ByteWriter;

inline constexpr uint32_t kDefaultEmbeddingDim = 1280;

// One [Protein, Annotation] tuple.
struct ProteinRecord {
  std::string id;
  std::string sequence;
  std::string annotation;
  std::optional<std::string> task;
  std::optional<std::vector<float>> embedding;

  bool operator==(const ProteinRecord&) const = default;
};

// The 20 standard amino acids plus the ambiguity codes X, B, Z and U.
bool is_allowed_residue(char c);

// Uppercases `sequence` and returns it. Throws Error(kFormat) naming the
// first illegal character, or if the sequence is empty.
std::string normalize_sequence(std::string_view sequence);

class KnowledgeStore {
 public:
  explicit KnowledgeStore(uint32_t dim = kDefaultEmbeddingDim);

  // Validates and appends. The sequence is uppercased. Throws on an empty or
  // duplicate id, an illegal residue, a wrongly sized embedding, or when the
  // store is sealed.
  void add(ProteinRecord record);

  void set_embedding(std::string_view id, std::vector<float> embedding);

  // After sealing the store is read-only.
  void seal() { sealed_ = true; }
  bool sealed() const { return sealed_; }

  uint32_t dim() const { return dim_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::span<const ProteinRecord> records() const { return records_; }
  const ProteinRecord& at(size_t index) const { return records_.at(index); }
  const ProteinRecord* find(std::string_view id) const;
  std::optional<size_t> index_of(std::string_view id) const;

  // annotation -> member ids in insertion order.
  const std::map<std::string, std::vector<std::string>>& annotation_groups()
      const {
    return annotation_groups_;
  }

  size_t embedded_count() const;

  void serialize(ByteWriter& out) const;
  static KnowledgeStore deserialize(ByteReader& in);

  bool operator==(const KnowledgeStore& other) const {
    return dim_ == other.dim_ && records_ == other.records_;
  }

 private:
  void check_mutable() const;

  uint32_t dim_;
  bool sealed_ = false;
  std::vector<ProteinRecord> records_;
  std::unordered_map<std::string, size_t> index_;
  std::map<std::string, std::vector<std::string>> annotation_groups_;
};

// Reads line-delimited JSON records {id, sequence, annotation, task}. Blank
// lines are skipped. Errors carry the 1-based line number.
KnowledgeStore ingest_records(std::istream& in,
                              uint32_t dim = kDefaultEmbeddingDim);
KnowledgeStore ingest_records_file(const std::filesystem::path& path,
                                   uint32_t dim = kDefaultEmbeddingDim);

// Binary embedding file:
//   "RAPMEMB1" | u32 dim | u32 count |
//   count x (u16 id length | id bytes | dim x f32), little-endian.
struct EmbeddingEntry {
  std::string id;
  std::vector<float> vector;
};

struct EmbeddingFile {
  uint32_t dim = 0;
  std::vector<EmbeddingEntry> entries;
};

inline constexpr std::string_view kEmbeddingMagic = "RAPMEMB1";

EmbeddingFile read_embeddings(std::istream& in);
EmbeddingFile read_embeddings_file(const std::filesystem::path& path);
// Reads only the header and returns the declared dimension.
uint32_t peek_embedding_dim(const std::filesystem::path& path);
void write_embeddings(std::ostream& out, uint32_t dim,
                      std::span<const EmbeddingEntry> entries);
void write_embeddings_file(const std::filesystem::path& path, uint32_t dim,
                           std::span<const EmbeddingEntry> entries);

// Attaches every vector in the file to its record. The whole file is
// validated before the store is touched.
void attach_embeddings(KnowledgeStore& store, std::istream& in);
void attach_embeddings_file(KnowledgeStore& store,
                            const std::filesystem::path& path);

}  // namespace rapm

#endif  // RAPM_KNOWLEDGE_STORE_H_
