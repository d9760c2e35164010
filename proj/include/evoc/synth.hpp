// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evoc/sensor.hpp"

namespace evoc::synth {

/// Solid box; the pose maps box coordinates (centred) to world coordinates.
struct OrientedBox {
  RigidTransform pose;
  Vec3 size = Vec3::Ones();
};

/// Box moving with constant linear velocity and yaw rate from `initial` at
/// t = 0, unless `scripted` poses are given (then those are used verbatim).
struct DynamicBox {
  std::string id;
  Vec3 size = Vec3::Ones();
  RigidTransform initial;
  Vec3 velocity = Vec3::Zero();
  double yaw_rate = 0.0;
  std::map<double, RigidTransform> scripted;

  /// Throws InputError for a scripted box without a pose at t.
  RigidTransform pose_at(double t) const;
};

struct Scene {
  std::optional<double> ground_height;  // world z of the ground plane
  std::vector<OrientedBox> static_boxes;
  std::vector<DynamicBox> dynamic_boxes;
  double extent = 100.0;  // half-width of the axis-aligned scene bounds
};

struct ScanPattern {
  int azimuth_count = 1024;
  double azimuth_min = -kPi;
  double azimuth_max = kPi;
  int polar_count = 32;
  double polar_min = deg_to_rad(80.0);
  double polar_max = deg_to_rad(120.0);
  double max_range = 60.0;
  double noise_sigma = 0.0;  // Gaussian range noise, metres
  std::uint64_t seed = 0;

  void validate() const;
};

/// Unit ray directions in sensor coordinates, polar-major. Azimuths sit at
/// bin centres of [azimuth_min, azimuth_max); polar angles span
/// [polar_min, polar_max] inclusive.
std::vector<Vec3> scan_directions(const ScanPattern& pattern);

/// Exact nearest intersection along the ray with the scene at time t, or
/// nullopt. Rays parallel to the ground plane do not hit it.
std::optional<double> analytic_depth(const Scene& scene, const Vec3& origin, const Vec3& direction,
                                     double t);

/// Slab test; returns the entry distance of a ray starting outside the box.
std::optional<double> intersect_box(const OrientedBox& box, const Vec3& origin,
                                    const Vec3& direction);

/// One sweep from `sensor_pose`. Each pattern ray yields at most one point:
/// the nearest hit within max_range, perturbed along the ray by Gaussian
/// noise drawn from a generator seeded with (seed, timestamp).
SensorFrame simulate_lidar(const Scene& scene, const RigidTransform& sensor_pose,
                           const ScanPattern& pattern, double timestamp);

/// A scene with its scan pattern and frame schedule.
struct SuiteCase {
  std::string name;
  std::string description;
  Scene scene;
  ScanPattern pattern;
  std::vector<double> timestamps;
  std::vector<RigidTransform> ego_poses;
  std::size_t reference_index = 0;

  double reference_timestamp() const { return timestamps.at(reference_index); }
  const RigidTransform& reference_pose() const { return ego_poses.at(reference_index); }
  std::vector<SensorFrame> simulate() const;
  /// Annotation tracks for the dynamic boxes, one pose per scheduled frame.
  std::vector<ObjectTrack> tracks() const;
};

/// Fixed catalogue:
///   a  static room (ground plane, four walls, three boxes), noise-free
///   b  scene a with 0.02 m range noise
///   c  room with a box driving across the grid at 5 m/s
///   d  room with a 0.2 x 0.2 x 3 m pole 20 m ahead
std::vector<SuiteCase> make_standard_suite();

/// Looks a case up by name ("a".."d"); throws InputError otherwise.
SuiteCase suite_case(const std::string& name);

}  // namespace evoc::synth
