// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "evoc/grid_spec.hpp"
#include "evoc/sensor.hpp"

namespace evoc {

/// Per-frame reflection and transmission counts over spherical bins. Values
/// are weighted event counts, not probabilities. Layout follows Lattice3:
/// rho is contiguous within each (theta, phi) column.
struct SphericalGrid {
  SphericalGridSpec spec;
  std::vector<double> reflections;
  std::vector<double> transmissions;
};

/// Deposits unit mass for a point at lattice coordinates (c0, c1, c2). The
/// mass is spread over the <= 8 bins overlapped by a bin-sized box centred
/// at the point, using the separable per-axis overlap fraction. Points
/// outside the lattice extents deposit nothing; a box that straddles the
/// lattice boundary deposits only its in-lattice fraction.
void scatter_point(const Lattice3& lattice, double c0, double c1, double c2,
                   std::span<double> field);

/// Scatters coordinates already expressed on the lattice axes, in order.
std::vector<double> scatter_reflections(std::span<const SphericalPoint> points,
                                        const Lattice3& lattice);

/// Converts each sensor-frame point to (rho, theta, phi) and scatters it.
std::vector<double> scatter_reflections(const SensorFrame& frame, const SphericalGridSpec& spec);

/// Exclusive reverse cumulative sum along rho:
/// q(rho, theta, phi) = sum over rho' > rho of r(rho', theta, phi).
std::vector<double> compute_transmissions(std::span<const double> reflections,
                                          const Lattice3& lattice);

SphericalGrid map_frame(const SensorFrame& frame, const SphericalGridSpec& spec);

}  // namespace evoc
