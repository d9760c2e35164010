// SPDX-License-Identifier: Apache-2.0
//
// Little-endian fixed-width encoding shared by the binary file formats.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evoc/error.hpp"
#include "evoc/geometry.hpp"

namespace evoc::io::detail {

class ByteWriter {
 public:
  void put_bytes(std::string_view bytes) { buffer_.append(bytes); }

  void put_u32(std::uint32_t v) { put_le(v); }
  void put_u64(std::uint64_t v) { put_le(v); }
  void put_f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
  void put_f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }
  void put_u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }

  const std::string& bytes() const { return buffer_; }
  void reserve(std::size_t n) { buffer_.reserve(n); }

 private:
  template <typename U>
  void put_le(U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      buffer_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
  }

  std::string buffer_;
};

class ByteReader {
 public:
  ByteReader(std::span<const char> data, std::string what) : data_(data), what_(std::move(what)) {}

  std::string_view take_bytes(std::size_t n) {
    require(n);
    std::string_view out(data_.data() + pos_, n);
    pos_ += n;
    return out;
  }
  std::uint32_t get_u32() { return get_le<std::uint32_t>(); }
  std::uint64_t get_u64() { return get_le<std::uint64_t>(); }
  float get_f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
  double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
  std::uint8_t get_u8() {
    require(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  const std::string& what() const { return what_; }

 private:
  void require(std::size_t n) const {
    if (remaining() < n) throw InputError(what_ + ": truncated file");
  }

  template <typename U>
  U get_le() {
    require(sizeof(U));
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      v |= static_cast<U>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return v;
  }

  std::span<const char> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

/// Pose read from a file. Quaternions already unit to working precision are
/// kept verbatim so that read -> write reproduces the input bytes; others are
/// normalized when within `tolerance` of unit length.
inline RigidTransform stored_pose(const Quat& q, const Vec3& t, double tolerance = 1e-6) {
  if (std::abs(q.norm() - 1.0) <= RigidTransform::kUnitTolerance) return {q, t};
  return RigidTransform::normalized(q, t, tolerance);
}

std::vector<char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace evoc::io::detail
