// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "evoc/sensor.hpp"

namespace evoc::io {

/// Binary LIDAR sweep, little-endian:
///
///   "EVOC" | u32 version | f64 timestamp | 7 x f64 pose (qw qx qy qz tx ty tz)
///   | u64 point count | count x 3 x f32 (x y z, sensor frame)
///
/// Points are stored in single precision, so writing a frame rounds its
/// coordinates; a frame that was read back writes identical bytes.
inline constexpr std::uint32_t kFrameFormatVersion = 1;

/// Pose quaternions must be unit within this tolerance on read.
inline constexpr double kFrameQuaternionTolerance = 1e-6;

std::string encode_frame(const SensorFrame& frame);

/// Throws InputError on a bad magic, version or length, ValidationError for
/// a non-unit quaternion or non-finite values.
SensorFrame decode_frame(std::span<const char> bytes, const std::string& what = "frame");

void write_frame(const std::filesystem::path& path, const SensorFrame& frame);
SensorFrame read_frame(const std::filesystem::path& path);

}  // namespace evoc::io
