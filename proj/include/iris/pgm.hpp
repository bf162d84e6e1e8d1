// Copyright 2026 The iris-sim Authors
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
//
// Binary PGM (P5). Rasters are 16-bit big-endian with maxval 65535, the
// wire format for every image and reflectance grid this project emits.
// 8-bit output exists only for heatmap overlays.

#ifndef IRIS_PGM_HPP_
#define IRIS_PGM_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iris/errors.hpp"
#include "iris/fsio.hpp"

namespace iris {

struct PgmRaster {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> samples;  // row-major, row 0 at top
};

namespace detail {

class ByteScanner {
 public:
  ByteScanner(const std::string& bytes, std::string path)
      : bytes_(bytes), path_(std::move(path)) {}

  std::size_t offset() const { return pos_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_ + ": " + what + " at byte offset " +
                     std::to_string(pos_));
  }

  char peek() const {
    if (pos_ >= bytes_.size()) fail("unexpected end of file");
    return bytes_[pos_];
  }

  char take() {
    const char c = peek();
    ++pos_;
    return c;
  }

  // PGM headers allow whitespace runs and '#' comments between tokens.
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long take_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || bytes_[pos_] < '0' || bytes_[pos_] > '9') {
      fail("expected a decimal number");
    }
    long v = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1000000000L) fail("number too large");
      ++pos_;
    }
    return v;
  }

  const std::string& rest() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

 private:
  const std::string& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PgmRaster read_pgm16(const std::filesystem::path& path) {
  const std::string bytes = read_file_bytes(path);
  detail::ByteScanner sc(bytes, path.string());
  if (sc.take() != 'P' || sc.take() != '5') {
    throw ParseError(path.string() + ": not a binary PGM (missing P5 magic)");
  }
  const long width = sc.take_number();
  const long height = sc.take_number();
  const long maxval = sc.take_number();
  if (width <= 0 || height <= 0) sc.fail("dimensions must be positive");
  if (maxval != 65535) sc.fail("expected maxval 65535");
  // Exactly one whitespace byte separates the header from the raster.
  const char sep = sc.take();
  if (sep != '\n' && sep != ' ' && sep != '\t' && sep != '\r') {
    sc.fail("expected single whitespace before raster");
  }
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (sc.size() - sc.offset() < 2 * n) {
    throw ParseError(path.string() + ": truncated raster, have " +
                     std::to_string(sc.size() - sc.offset()) + " bytes, need " +
                     std::to_string(2 * n) + " at byte offset " +
                     std::to_string(sc.offset()));
  }
  PgmRaster raster;
  raster.width = static_cast<int>(width);
  raster.height = static_cast<int>(height);
  raster.samples.resize(n);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + sc.offset();
  for (std::size_t i = 0; i < n; ++i) {
    raster.samples[i] =
        static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]);
  }
  return raster;
}

inline void write_pgm16(const std::filesystem::path& path, int width,
                        int height, const std::vector<std::uint16_t>& samples) {
  if (width <= 0 || height <= 0 ||
      samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DomainError("write_pgm16: raster size does not match dimensions");
  }
  std::string bytes;
  bytes.reserve(32 + samples.size() * 2);
  bytes += "P5\n" + std::to_string(width) + " " + std::to_string(height) +
           "\n65535\n";
  for (const std::uint16_t v : samples) {
    bytes.push_back(static_cast<char>((v >> 8) & 0xff));
    bytes.push_back(static_cast<char>(v & 0xff));
  }
  atomic_write_file(path, bytes);
}

inline void write_pgm8(const std::filesystem::path& path, int width,
                       int height, const std::vector<std::uint8_t>& samples) {
  if (width <= 0 || height <= 0 ||
      samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DomainError("write_pgm8: raster size does not match dimensions");
  }
  std::string bytes;
  bytes.reserve(32 + samples.size());
  bytes += "P5\n" + std::to_string(width) + " " + std::to_string(height) +
           "\n255\n";
  for (const std::uint8_t v : samples) bytes.push_back(static_cast<char>(v));
  atomic_write_file(path, bytes);
}

}  // namespace iris

#endif  // IRIS_PGM_HPP_
