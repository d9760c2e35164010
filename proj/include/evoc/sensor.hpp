// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "evoc/geometry.hpp"

namespace evoc {

/// One LIDAR sweep. Points are in sensor coordinates; `ego_pose` maps sensor
/// coordinates to world coordinates.
struct SensorFrame {
  double timestamp = 0.0;
  RigidTransform ego_pose;
  std::vector<Vec3> points;
};

/// Throws InputError unless timestamps are strictly increasing.
void check_time_ordered(std::span<const SensorFrame> frames);

/// Annotated rigid object. Box poses map box coordinates (origin at the box
/// centre, axes along length/width/height) to world coordinates.
class ObjectTrack {
 public:
  /// Timestamps are matched within this tolerance.
  static constexpr double kTimeTolerance = 1e-6;

  ObjectTrack(std::string id, const Vec3& size);

  const std::string& id() const { return id_; }
  const Vec3& size() const { return size_; }

  void set_pose(double timestamp, const RigidTransform& pose);
  const RigidTransform* pose_at(double timestamp) const;
  const std::map<double, RigidTransform>& poses() const { return poses_; }

  /// Box-local test, half-open on the faces: -s/2 <= x < s/2 per axis.
  bool contains_local(const Vec3& local) const;

 private:
  std::string id_;
  Vec3 size_;
  std::map<double, RigidTransform> poses_;
};

}  // namespace evoc
