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

// Little-endian byte buffers used by the embedding file and snapshot formats.

#ifndef RAPM_BINARY_IO_H_
#define RAPM_BINARY_IO_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace rapm {

class ByteWriter {
 public:
  void put_u8(uint8_t v);
  void put_u16(uint16_t v);
  void put_u32(uint32_t v);
  void put_u64(uint64_t v);
  void put_f32(float v);
  void put_f64(double v);
  // LEB128 unsigned varint.
  void put_varint(uint64_t v);
  // Varint length followed by the raw bytes.
  void put_string(std::string_view s);
  void put_bytes(std::string_view s);
  void put_floats(std::span<const float> values);

  const std::string& bytes() const { return buffer_; }
  std::string take() { return std::move(buffer_); }
  size_t size() const { return buffer_.size(); }

 private:
  std::string buffer_;
};

// Reads from a borrowed buffer. Every read past the end throws
// Error(kFormat) naming `context`.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data, std::string context = "buffer")
      : data_(data), context_(std::move(context)) {}

  uint8_t get_u8();
  uint16_t get_u16();
  uint32_t get_u32();
  uint64_t get_u64();
  float get_f32();
  double get_f64();
  uint64_t get_varint();
  std::string get_string();
  std::string_view get_bytes(size_t n);
  void get_floats(std::span<float> out);

  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }
  size_t position() const { return pos_; }

  // Throws Error(kFormat) unless the whole buffer has been consumed.
  void expect_end() const;

 private:
  void require(size_t n) const;

  std::string_view data_;
  size_t pos_ = 0;
  std::string context_;
};

}  // namespace rapm

#endif  // RAPM_BINARY_IO_H_
