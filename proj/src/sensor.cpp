// SPDX-License-Identifier: Apache-2.0
#include "evoc/sensor.hpp"

#include <cmath>
#include <sstream>

#include "evoc/error.hpp"

namespace evoc {

void check_time_ordered(std::span<const SensorFrame> frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!(frames[i].timestamp > frames[i - 1].timestamp)) {
      std::ostringstream msg;
      msg << "frame timestamps must be strictly increasing (frame " << i << ")";
      throw InputError(msg.str());
    }
  }
}

ObjectTrack::ObjectTrack(std::string id, const Vec3& size) : id_(std::move(id)), size_(size) {
  if (!(size.x() > 0.0 && size.y() > 0.0 && size.z() > 0.0) || !size.allFinite()) {
    throw ValidationError("object '" + id_ + "' must have a positive size");
  }
}

void ObjectTrack::set_pose(double timestamp, const RigidTransform& pose) {
  poses_.insert_or_assign(timestamp, pose);
}

const RigidTransform* ObjectTrack::pose_at(double timestamp) const {
  auto it = poses_.lower_bound(timestamp - kTimeTolerance);
  if (it == poses_.end() || std::abs(it->first - timestamp) > kTimeTolerance) return nullptr;
  return &it->second;
}

bool ObjectTrack::contains_local(const Vec3& local) const {
  for (int a = 0; a < 3; ++a) {
    const double h = 0.5 * size_[a];
    if (!(local[a] >= -h && local[a] < h)) return false;
  }
  return true;
}

}  // namespace evoc
