// SPDX-License-Identifier: Apache-2.0
#include "evoc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evoc/error.hpp"

namespace evoc {

RigidTransform::RigidTransform(const Quat& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const double norm = rotation.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitTolerance) {
    std::ostringstream msg;
    msg << "rotation quaternion is not unit (norm " << norm << ")";
    throw ValidationError(msg.str());
  }
  if (!translation.allFinite()) throw ValidationError("translation is not finite");
}

RigidTransform RigidTransform::from_yaw(double yaw, const Vec3& t) {
  return {Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ())), t};
}

RigidTransform RigidTransform::normalized(const Quat& rotation, const Vec3& translation,
                                          double tolerance) {
  const double norm = rotation.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "rotation quaternion is not unit (norm " << norm << ")";
    throw ValidationError(msg.str());
  }
  return {rotation.normalized(), translation};
}

RigidTransform RigidTransform::inverse() const {
  const Quat inv = rotation_.conjugate();
  return {inv, -(inv * translation_)};
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {(a.rotation() * b.rotation()).normalized(), a.apply(b.translation())};
}

SphericalPoint cart_to_spherical(const Vec3& p) {
  const double rho = p.norm();
  if (!(rho > 0.0)) throw DegenerateInputError("spherical coordinates of the zero vector");
  // Clamp guards against |z| / rho exceeding one by an ulp.
  const double c = std::clamp(p.z() / rho, -1.0, 1.0);
  return {rho, std::acos(c), std::atan2(p.y(), p.x())};
}

Vec3 spherical_to_cart(const SphericalPoint& s) {
  return s.rho * direction_from_angles(s.theta, s.phi);
}

}  // namespace evoc
