// SPDX-License-Identifier: Apache-2.0
#include "evoc/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "evoc/error.hpp"

namespace evoc::synth {

RigidTransform DynamicBox::pose_at(double t) const {
  if (!scripted.empty()) {
    auto it = scripted.lower_bound(t - ObjectTrack::kTimeTolerance);
    if (it == scripted.end() || std::abs(it->first - t) > ObjectTrack::kTimeTolerance) {
      std::ostringstream msg;
      msg << "scripted box '" << id << "' has no pose at t=" << t;
      throw InputError(msg.str());
    }
    return it->second;
  }
  const Quat spin(Eigen::AngleAxisd(yaw_rate * t, Vec3::UnitZ()));
  return {(spin * initial.rotation()).normalized(), initial.translation() + velocity * t};
}

void ScanPattern::validate() const {
  if (azimuth_count < 1 || polar_count < 1) throw ValidationError("scan counts must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
  if (!(max_range > 0.0)) throw ValidationError("max range must be positive");
}

std::vector<Vec3> scan_directions(const ScanPattern& pattern) {
  pattern.validate();
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(pattern.azimuth_count) * pattern.polar_count);
  const double d_az = (pattern.azimuth_max - pattern.azimuth_min) / pattern.azimuth_count;
  for (int j = 0; j < pattern.polar_count; ++j) {
    const double theta =
        pattern.polar_count == 1
            ? 0.5 * (pattern.polar_min + pattern.polar_max)
            : pattern.polar_min + j * (pattern.polar_max - pattern.polar_min) / (pattern.polar_count - 1);
    for (int k = 0; k < pattern.azimuth_count; ++k) {
      dirs.push_back(direction_from_angles(theta, pattern.azimuth_min + (k + 0.5) * d_az));
    }
  }
  return dirs;
}

std::optional<double> intersect_box(const OrientedBox& box, const Vec3& origin,
                                    const Vec3& direction) {
  const RigidTransform to_local = box.pose.inverse();
  const Vec3 o = to_local.apply(origin);
  const Vec3 d = to_local.rotate(direction);
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double h = 0.5 * box.size[a];
    if (d[a] == 0.0) {
      if (o[a] < -h || o[a] > h) return std::nullopt;
      continue;
    }
    double t0 = (-h - o[a]) / d[a];
    double t1 = (h - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
  }
  if (t_enter > t_exit || t_enter <= 0.0) return std::nullopt;
  return t_enter;
}

std::optional<double> analytic_depth(const Scene& scene, const Vec3& origin, const Vec3& direction,
                                     double t) {
  std::optional<double> best;
  auto consider = [&best](std::optional<double> d) {
    if (d && (!best || *d < *best)) best = d;
  };
  if (scene.ground_height && direction.z() != 0.0) {
    const double d = (*scene.ground_height - origin.z()) / direction.z();
    if (d > 0.0) consider(d);
  }
  for (const OrientedBox& box : scene.static_boxes) consider(intersect_box(box, origin, direction));
  for (const DynamicBox& box : scene.dynamic_boxes) {
    consider(intersect_box({box.pose_at(t), box.size}, origin, direction));
  }
  return best;
}

SensorFrame simulate_lidar(const Scene& scene, const RigidTransform& sensor_pose,
                           const ScanPattern& pattern, double timestamp) {
  SensorFrame frame{timestamp, sensor_pose, {}};
  const std::vector<Vec3> dirs = scan_directions(pattern);
  const Vec3 origin = sensor_pose.translation();

  std::mt19937_64 rng(pattern.seed ^ (std::bit_cast<std::uint64_t>(timestamp) * 0x9E3779B97F4A7C15ull));
  std::normal_distribution<double> noise(0.0, 1.0);

  frame.points.reserve(dirs.size());
  for (const Vec3& dir : dirs) {
    const auto depth = analytic_depth(scene, origin, sensor_pose.rotate(dir), timestamp);
    if (!depth || *depth > pattern.max_range) continue;
    double range = *depth;
    if (pattern.noise_sigma > 0.0) range += pattern.noise_sigma * noise(rng);
    if (range <= 0.0) continue;
    frame.points.push_back(dir * range);
  }
  return frame;
}

std::vector<SensorFrame> SuiteCase::simulate() const {
  std::vector<SensorFrame> frames;
  frames.reserve(timestamps.size());
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    frames.push_back(simulate_lidar(scene, ego_poses[i], pattern, timestamps[i]));
  }
  return frames;
}

std::vector<ObjectTrack> SuiteCase::tracks() const {
  std::vector<ObjectTrack> out;
  for (const DynamicBox& box : scene.dynamic_boxes) {
    ObjectTrack track(box.id, box.size);
    for (double t : timestamps) track.set_pose(t, box.pose_at(t));
    out.push_back(std::move(track));
  }
  return out;
}

namespace {

constexpr double kSensorHeight = 1.8;
constexpr double kFramePeriod = 0.1;
constexpr int kFrameCount = 50;
constexpr std::size_t kReferenceIndex = 25;
constexpr double kEgoSpeed = 1.0;

OrientedBox axis_box(const Vec3& center, const Vec3& size) {
  return {RigidTransform::from_translation(center), size};
}

// Inner faces at +-half_x and +-half_y. Half extents ending in .3 put the
// faces in the middle of a 0.2 m voxel.
Scene room(double half_x = 12.3, double half_y = 9.3) {
  Scene scene;
  scene.ground_height = 0.0;
  scene.extent = std::max(half_x, half_y) + 10.0;
  constexpr double kThickness = 0.4;
  constexpr double kHeight = 3.9;
  const double span_x = 2.0 * (half_x + kThickness);
  const double span_y = 2.0 * (half_y + kThickness);
  for (double sign : {1.0, -1.0}) {
    scene.static_boxes.push_back(axis_box({sign * (half_x + 0.5 * kThickness), 0.0, 0.5 * kHeight},
                                          {kThickness, span_y, kHeight}));
    scene.static_boxes.push_back(axis_box({0.0, sign * (half_y + 0.5 * kThickness), 0.5 * kHeight},
                                          {span_x, kThickness, kHeight}));
  }
  return scene;
}

ScanPattern standard_pattern() {
  ScanPattern p;
  p.azimuth_count = 2048;
  p.polar_count = 40;
  p.polar_min = deg_to_rad(80.0);
  p.polar_max = deg_to_rad(120.0);
  p.max_range = 60.0;
  p.seed = 7;
  return p;
}

SuiteCase with_schedule(std::string name, std::string description, Scene scene,
                        ScanPattern pattern) {
  SuiteCase c{std::move(name), std::move(description), std::move(scene), pattern, {}, {},
              kReferenceIndex};
  for (int i = 0; i < kFrameCount; ++i) {
    const double t = i * kFramePeriod;
    const double x = kEgoSpeed * (t - static_cast<double>(kReferenceIndex) * kFramePeriod);
    c.timestamps.push_back(t);
    c.ego_poses.push_back(RigidTransform::from_translation({x, 0.0, kSensorHeight}));
  }
  return c;
}

Scene static_room() {
  Scene scene = room();
  scene.static_boxes.push_back(axis_box({6.3, 4.1, 1.75}, {2.0, 2.0, 3.5}));
  scene.static_boxes.push_back(
      {RigidTransform::from_yaw(deg_to_rad(30.0), {-5.0, -5.0, 1.65}), {4.4, 1.8, 3.3}});
  scene.static_boxes.push_back(axis_box({7.0, -5.0, 1.75}, {1.0, 1.0, 3.5}));
  return scene;
}

}  // namespace

std::vector<SuiteCase> make_standard_suite() {
  std::vector<SuiteCase> suite;
  suite.push_back(with_schedule("a", "static room with ground plane and three boxes",
                                static_room(), standard_pattern()));

  ScanPattern noisy = standard_pattern();
  noisy.noise_sigma = 0.02;
  suite.push_back(with_schedule("b", "static room with 0.02 m range noise", static_room(), noisy));

  // Car-sized box driving along +y at 5 m/s, centred in front of the ego
  // vehicle at the reference time.
  // The room is wide enough for the whole crossing.
  Scene moving = room(16.3, 15.3);
  DynamicBox car;
  car.id = "car";
  car.size = {4.0, 2.0, 1.6};
  const double t_ref = static_cast<double>(kReferenceIndex) * kFramePeriod;
  car.initial = RigidTransform::from_yaw(0.5 * kPi, {14.0, -5.0 * t_ref, 0.8});
  car.velocity = {0.0, 5.0, 0.0};
  moving.dynamic_boxes.push_back(car);
  suite.push_back(with_schedule("c", "room with a box crossing the grid at 5 m/s", moving,
                                standard_pattern()));

  Scene pole = room(24.3, 9.3);
  pole.static_boxes.push_back(axis_box({20.0, 0.0, 1.5}, {0.2, 0.2, 3.0}));
  suite.push_back(with_schedule("d", "room with a thin pole 20 m ahead", pole, standard_pattern()));
  return suite;
}

SuiteCase suite_case(const std::string& name) {
  for (SuiteCase& c : make_standard_suite()) {
    if (c.name == name) return c;
  }
  throw InputError("unknown suite scene '" + name + "' (expected a, b, c or d)");
}

}  // namespace evoc::synth
