// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace evoc {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

/// Proper rigid motion x -> R x + t. The rotation is kept as a unit
/// quaternion; construction rejects quaternions whose norm deviates from one
/// by more than kUnitTolerance.
class RigidTransform {
 public:
  static constexpr double kUnitTolerance = 1e-9;

  RigidTransform() = default;
  RigidTransform(const Quat& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Quat::Identity(), t}; }
  /// Rotation by `yaw` radians about +z followed by translation.
  static RigidTransform from_yaw(double yaw, const Vec3& t);
  /// Normalizes `rotation` first; rejects norms further than `tolerance` from one.
  static RigidTransform normalized(const Quat& rotation, const Vec3& translation,
                                   double tolerance);

  const Quat& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 rotate(const Vec3& v) const { return rotation_ * v; }
  RigidTransform inverse() const;

  Eigen::Matrix3d rotation_matrix() const { return rotation_.toRotationMatrix(); }

 private:
  Quat rotation_ = Quat::Identity();
  Vec3 translation_ = Vec3::Zero();
};

/// compose(a, b) applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
inline RigidTransform invert(const RigidTransform& a) { return a.inverse(); }
inline Vec3 apply(const RigidTransform& a, const Vec3& p) { return a.apply(p); }

inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  return compose(a, b);
}

/// Affine form of a transform, for hot loops that apply the same motion to
/// millions of points.
struct AffineMap {
  Eigen::Matrix3d linear;
  Vec3 offset;

  explicit AffineMap(const RigidTransform& t)
      : linear(t.rotation_matrix()), offset(t.translation()) {}
  Vec3 operator()(const Vec3& p) const { return linear * p + offset; }
};

/// Spherical coordinates: radial distance, polar angle from +z, azimuth from +x.
struct SphericalPoint {
  double rho = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws DegenerateInputError for the zero vector.
SphericalPoint cart_to_spherical(const Vec3& p);
Vec3 spherical_to_cart(const SphericalPoint& s);

/// Unit direction for polar angle theta and azimuth phi.
inline Vec3 direction_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

constexpr double kPi = 3.14159265358979323846;
constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace evoc
