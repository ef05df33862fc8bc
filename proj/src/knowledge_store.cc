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

#include "rapm/knowledge_store.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "rapm/binary_io.h"
#include "rapm/error.h"

namespace rapm {
namespace {

std::string at_line(size_t line) { return " at line " + std::to_string(line); }

std::string char_repr(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (u >= 0x20 && u < 0x7f) return std::string(1, c);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "\\x%02x", u);
  return buf;
}

std::string required_string(const nlohmann::json& obj, const char* key,
                            size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(ErrorCode::kFormat, std::string("malformed record") +
                                        at_line(line) + ": missing string '" +
                                        key + "'");
  }
  return it->get<std::string>();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

}  // namespace

bool is_allowed_residue(char c) {
  static constexpr std::string_view kAlphabet = "ACDEFGHIKLMNPQRSTVWYXBZU";
  return kAlphabet.find(c) != std::string_view::npos;
}

std::string normalize_sequence(std::string_view sequence) {
  if (sequence.empty()) throw Error(ErrorCode::kFormat, "empty sequence");
  std::string out(sequence);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!is_allowed_residue(c)) {
      throw Error(ErrorCode::kFormat,
                  "illegal residue '" + char_repr(c) + "'");
    }
  }
  return out;
}

KnowledgeStore::KnowledgeStore(uint32_t dim) : dim_(dim) {
  if (dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be > 0");
  }
}

void KnowledgeStore::check_mutable() const {
  if (sealed_) {
    throw Error(ErrorCode::kFailedPrecondition, "knowledge store is sealed");
  }
}

void KnowledgeStore::add(ProteinRecord record) {
  check_mutable();
  if (record.id.empty()) throw Error(ErrorCode::kFormat, "empty record id");
  if (index_.contains(record.id)) {
    throw Error(ErrorCode::kAlreadyExists, "duplicate id '" + record.id + "'");
  }
  record.sequence = normalize_sequence(record.sequence);
  if (record.embedding && record.embedding->size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding for '" + record.id + "' has dimension " +
                    std::to_string(record.embedding->size()) + ", store has " +
                    std::to_string(dim_));
  }
  index_.emplace(record.id, records_.size());
  annotation_groups_[record.annotation].push_back(record.id);
  records_.push_back(std::move(record));
}

void KnowledgeStore::set_embedding(std::string_view id,
                                   std::vector<float> embedding) {
  check_mutable();
  auto idx = index_of(id);
  if (!idx) {
    throw Error(ErrorCode::kNotFound,
                "unknown id '" + std::string(id) + "' in embeddings");
  }
  if (embedding.size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding for '" + std::string(id) + "' has dimension " +
                    std::to_string(embedding.size()) + ", store has " +
                    std::to_string(dim_));
  }
  records_[*idx].embedding = std::move(embedding);
}

const ProteinRecord* KnowledgeStore::find(std::string_view id) const {
  auto idx = index_of(id);
  return idx ? &records_[*idx] : nullptr;
}

std::optional<size_t> KnowledgeStore::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t KnowledgeStore::embedded_count() const {
  return static_cast<size_t>(
      std::count_if(records_.begin(), records_.end(),
                    [](const ProteinRecord& r) { return r.embedding.has_value(); }));
}

void KnowledgeStore::serialize(ByteWriter& out) const {
  out.put_u32(dim_);
  out.put_varint(records_.size());
  for (const ProteinRecord& r : records_) {
    out.put_string(r.id);
    out.put_string(r.sequence);
    out.put_string(r.annotation);
    out.put_u8(r.task ? 1 : 0);
    if (r.task) out.put_string(*r.task);
    out.put_u8(r.embedding ? 1 : 0);
    if (r.embedding) out.put_floats(*r.embedding);
  }
}

KnowledgeStore KnowledgeStore::deserialize(ByteReader& in) {
  uint32_t dim = in.get_u32();
  if (dim == 0) throw Error(ErrorCode::kFormat, "store dimension is zero");
  KnowledgeStore store(dim);
  uint64_t count = in.get_varint();
  for (uint64_t i = 0; i < count; ++i) {
    ProteinRecord r;
    r.id = in.get_string();
    r.sequence = in.get_string();
    r.annotation = in.get_string();
    if (in.get_u8()) r.task = in.get_string();
    if (in.get_u8()) {
      std::vector<float> v(dim);
      in.get_floats(v);
      r.embedding = std::move(v);
    }
    store.add(std::move(r));
  }
  return store;
}

KnowledgeStore ingest_records(std::istream& in, uint32_t dim) {
  KnowledgeStore store(dim);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) {
          return std::isspace(c);
        })) {
      continue;
    }
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw Error(ErrorCode::kFormat, "malformed record" + at_line(line_no));
    }
    ProteinRecord record;
    record.id = required_string(obj, "id", line_no);
    record.sequence = required_string(obj, "sequence", line_no);
    record.annotation = required_string(obj, "annotation", line_no);
    if (auto it = obj.find("task"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) {
        throw Error(ErrorCode::kFormat,
                    "malformed record" + at_line(line_no) + ": 'task' must be a string");
      }
      record.task = it->get<std::string>();
    }
    try {
      store.add(std::move(record));
    } catch (const Error& e) {
      throw Error(e.code(), e.what() + at_line(line_no));
    }
  }
  return store;
}

KnowledgeStore ingest_records_file(const std::filesystem::path& path,
                                   uint32_t dim) {
  std::ifstream in = open_input(path);
  return ingest_records(in, dim);
}

namespace {

std::string read_exact(std::istream& in, size_t n, const char* what) {
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) {
    throw Error(ErrorCode::kFormat,
                std::string("truncated embedding file: ") + what);
  }
  return buf;
}

uint32_t read_header(std::istream& in, uint32_t* count) {
  std::string header = read_exact(in, 16, "header");
  if (std::string_view(header).substr(0, 8) != kEmbeddingMagic) {
    throw Error(ErrorCode::kFormat, "bad embedding file magic");
  }
  ByteReader reader(std::string_view(header).substr(8), "embedding header");
  uint32_t dim = reader.get_u32();
  *count = reader.get_u32();
  if (dim == 0) throw Error(ErrorCode::kFormat, "embedding dimension is zero");
  return dim;
}

}  // namespace

EmbeddingFile read_embeddings(std::istream& in) {
  EmbeddingFile file;
  uint32_t count = 0;
  file.dim = read_header(in, &count);
  file.entries.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    std::string len_bytes = read_exact(in, 2, "entry id length");
    ByteReader len_reader(len_bytes, "entry id length");
    uint16_t id_len = len_reader.get_u16();
    EmbeddingEntry entry;
    entry.id = read_exact(in, id_len, "entry id");
    std::string payload =
        read_exact(in, static_cast<size_t>(file.dim) * 4, "entry vector");
    ByteReader reader(payload, "entry vector");
    entry.vector.resize(file.dim);
    reader.get_floats(entry.vector);
    file.entries.push_back(std::move(entry));
  }
  return file;
}

EmbeddingFile read_embeddings_file(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_embeddings(in);
}

uint32_t peek_embedding_dim(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  uint32_t count = 0;
  return read_header(in, &count);
}

void write_embeddings(std::ostream& out, uint32_t dim,
                      std::span<const EmbeddingEntry> entries) {
  ByteWriter w;
  w.put_bytes(kEmbeddingMagic);
  w.put_u32(dim);
  w.put_u32(static_cast<uint32_t>(entries.size()));
  for (const EmbeddingEntry& e : entries) {
    if (e.vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "embedding for '" + e.id + "' does not match dimension " +
                      std::to_string(dim));
    }
    if (e.id.size() > UINT16_MAX) {
      throw Error(ErrorCode::kInvalidArgument, "embedding id too long");
    }
    w.put_u16(static_cast<uint16_t>(e.id.size()));
    w.put_bytes(e.id);
    w.put_floats(e.vector);
  }
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed to write embedding file");
}

void write_embeddings_file(const std::filesystem::path& path, uint32_t dim,
                           std::span<const EmbeddingEntry> entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  write_embeddings(out, dim, entries);
}

void attach_embeddings(KnowledgeStore& store, std::istream& in) {
  EmbeddingFile file = read_embeddings(in);
  if (file.dim != store.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding file dimension " + std::to_string(file.dim) +
                    " does not match store dimension " +
                    std::to_string(store.dim()));
  }
  for (const EmbeddingEntry& e : file.entries) {
    if (!store.find(e.id)) {
      throw Error(ErrorCode::kNotFound,
                  "unknown id '" + e.id + "' in embedding file");
    }
  }
  for (EmbeddingEntry& e : file.entries) {
    store.set_embedding(e.id, std::move(e.vector));
  }
}

void attach_embeddings_file(KnowledgeStore& store,
                            const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  attach_embeddings(store, in);
}

}  // namespace rapm
