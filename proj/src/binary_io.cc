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

#include "rapm/binary_io.h"

#include <bit>

#include "rapm/error.h"

namespace rapm {

void ByteWriter::put_u8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }

void ByteWriter::put_u16(uint16_t v) {
  for (int i = 0; i < 2; ++i) put_u8(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_u32(uint32_t v) {
  for (int i = 0; i < 4; ++i) put_u8(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_u64(uint64_t v) {
  for (int i = 0; i < 8; ++i) put_u8(static_cast<uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_f32(float v) { put_u32(std::bit_cast<uint32_t>(v)); }

void ByteWriter::put_f64(double v) { put_u64(std::bit_cast<uint64_t>(v)); }

void ByteWriter::put_varint(uint64_t v) {
  while (v >= 0x80) {
    put_u8(static_cast<uint8_t>(v | 0x80));
    v >>= 7;
  }
  put_u8(static_cast<uint8_t>(v));
}

void ByteWriter::put_string(std::string_view s) {
  put_varint(s.size());
  put_bytes(s);
}

void ByteWriter::put_bytes(std::string_view s) { buffer_.append(s); }

void ByteWriter::put_floats(std::span<const float> values) {
  for (float v : values) put_f32(v);
}

void ByteReader::require(size_t n) const {
  if (remaining() < n) {
    throw Error(ErrorCode::kFormat,
                "truncated " + context_ + ": needed " + std::to_string(n) +
                    " bytes at offset " + std::to_string(pos_) + ", " +
                    std::to_string(remaining()) + " left");
  }
}

uint8_t ByteReader::get_u8() {
  require(1);
  return static_cast<uint8_t>(data_[pos_++]);
}

uint16_t ByteReader::get_u16() {
  uint16_t v = get_u8();
  v |= static_cast<uint16_t>(get_u8()) << 8;
  return v;
}

uint32_t ByteReader::get_u32() {
  require(4);
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(get_u8()) << (8 * i);
  return v;
}

uint64_t ByteReader::get_u64() {
  require(8);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(get_u8()) << (8 * i);
  return v;
}

float ByteReader::get_f32() { return std::bit_cast<float>(get_u32()); }

double ByteReader::get_f64() { return std::bit_cast<double>(get_u64()); }

uint64_t ByteReader::get_varint() {
  uint64_t v = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    uint8_t byte = get_u8();
    v |= static_cast<uint64_t>(byte & 0x7f) << shift;
    if ((byte & 0x80) == 0) return v;
  }
  throw Error(ErrorCode::kFormat, "overlong varint in " + context_);
}

std::string ByteReader::get_string() {
  uint64_t n = get_varint();
  if (n > remaining()) require(n);
  return std::string(get_bytes(static_cast<size_t>(n)));
}

std::string_view ByteReader::get_bytes(size_t n) {
  require(n);
  std::string_view out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::get_floats(std::span<float> out) {
  require(out.size() * 4);
  for (float& v : out) v = get_f32();
}

void ByteReader::expect_end() const {
  if (!at_end()) {
    throw Error(ErrorCode::kFormat, std::to_string(remaining()) +
                                        " trailing bytes in " + context_);
  }
}

}  // namespace rapm
