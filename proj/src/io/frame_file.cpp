// SPDX-License-Identifier: Apache-2.0
#include "evoc/io/frame_file.hpp"

#include <cmath>

#include "io/bytes.hpp"

namespace evoc::io {

namespace {

constexpr std::string_view kMagic = "EVOC";
constexpr std::size_t kPointBytes = 3 * sizeof(float);

}  // namespace

std::string encode_frame(const SensorFrame& frame) {
  detail::ByteWriter w;
  w.reserve(4 + 4 + 8 * 9 + frame.points.size() * kPointBytes);
  w.put_bytes(kMagic);
  w.put_u32(kFrameFormatVersion);
  w.put_f64(frame.timestamp);
  const Quat& q = frame.ego_pose.rotation();
  const Vec3& t = frame.ego_pose.translation();
  for (double v : {q.w(), q.x(), q.y(), q.z(), t.x(), t.y(), t.z()}) w.put_f64(v);
  w.put_u64(frame.points.size());
  for (const Vec3& p : frame.points) {
    w.put_f32(static_cast<float>(p.x()));
    w.put_f32(static_cast<float>(p.y()));
    w.put_f32(static_cast<float>(p.z()));
  }
  return w.bytes();
}

SensorFrame decode_frame(std::span<const char> bytes, const std::string& what) {
  detail::ByteReader r(bytes, what);
  if (r.take_bytes(kMagic.size()) != kMagic) throw InputError(what + ": not a frame file");
  const std::uint32_t version = r.get_u32();
  if (version != kFrameFormatVersion) {
    throw InputError(what + ": unsupported frame version " + std::to_string(version));
  }
  SensorFrame frame;
  frame.timestamp = r.get_f64();
  double pose[7];
  for (double& v : pose) v = r.get_f64();
  if (!std::isfinite(frame.timestamp)) throw ValidationError(what + ": non-finite timestamp");
  for (double v : pose) {
    if (!std::isfinite(v)) throw ValidationError(what + ": non-finite pose");
  }
  frame.ego_pose = detail::stored_pose(Quat(pose[0], pose[1], pose[2], pose[3]),
                                       Vec3(pose[4], pose[5], pose[6]));

  const std::uint64_t count = r.get_u64();
  if (count > r.remaining() / kPointBytes || r.remaining() != count * kPointBytes) {
    throw InputError(what + ": point count " + std::to_string(count) +
                     " does not match payload of " + std::to_string(r.remaining()) + " bytes");
  }
  frame.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = r.get_f32();
    const double y = r.get_f32();
    const double z = r.get_f32();
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw ValidationError(what + ": non-finite point at index " + std::to_string(i));
    }
    frame.points.emplace_back(x, y, z);
  }
  return frame;
}

void write_frame(const std::filesystem::path& path, const SensorFrame& frame) {
  detail::write_file(path, encode_frame(frame));
}

SensorFrame read_frame(const std::filesystem::path& path) {
  const std::vector<char> bytes = detail::read_file(path);
  return decode_frame(bytes, path.string());
}

}  // namespace evoc::io
