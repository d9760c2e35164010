// SPDX-License-Identifier: Apache-2.0
#include "evoc/spherical_mapping.hpp"

#include <cassert>
#include <cmath>

#include "evoc/parallel.hpp"

namespace evoc {

namespace {

struct AxisSplit {
  int index[2];
  double weight[2];
};

// A bin-sized box centred at v covers [v - step/2, v + step/2]; in units of
// bins relative to the first bin centre it starts at u = (v - min)/step - 1/2
// and overlaps bin floor(u) by 1 - frac(u) and the next bin by frac(u).
AxisSplit split(const Axis& axis, double v) {
  const double u = axis.center_coordinate(v);
  const double base = std::floor(u);
  const double frac = u - base;
  const int i = static_cast<int>(base);
  return {{i, i + 1}, {1.0 - frac, frac}};
}

}  // namespace

void scatter_point(const Lattice3& lattice, double c0, double c1, double c2,
                   std::span<double> field) {
  assert(field.size() == lattice.size());
  if (!lattice.contains(c0, c1, c2)) return;
  const AxisSplit s0 = split(lattice.axes[0], c0);
  const AxisSplit s1 = split(lattice.axes[1], c1);
  const AxisSplit s2 = split(lattice.axes[2], c2);
  const int n0 = lattice.axes[0].count;
  const int n1 = lattice.axes[1].count;
  const int n2 = lattice.axes[2].count;
  for (int k2 = 0; k2 < 2; ++k2) {
    const int i2 = s2.index[k2];
    if (i2 < 0 || i2 >= n2 || s2.weight[k2] == 0.0) continue;
    for (int k1 = 0; k1 < 2; ++k1) {
      const int i1 = s1.index[k1];
      if (i1 < 0 || i1 >= n1 || s1.weight[k1] == 0.0) continue;
      const double w12 = s2.weight[k2] * s1.weight[k1];
      for (int k0 = 0; k0 < 2; ++k0) {
        const int i0 = s0.index[k0];
        if (i0 < 0 || i0 >= n0 || s0.weight[k0] == 0.0) continue;
        field[lattice.index(i0, i1, i2)] += w12 * s0.weight[k0];
      }
    }
  }
}

std::vector<double> scatter_reflections(std::span<const SphericalPoint> points,
                                        const Lattice3& lattice) {
  std::vector<double> field(lattice.size(), 0.0);
  for (const SphericalPoint& p : points) scatter_point(lattice, p.rho, p.theta, p.phi, field);
  return field;
}

std::vector<double> scatter_reflections(const SensorFrame& frame, const SphericalGridSpec& spec) {
  std::vector<double> field(spec.bin_count(), 0.0);
  for (const Vec3& p : frame.points) {
    if (!(p.squaredNorm() > 0.0)) continue;  // rho = 0 is below any valid rho_min
    const SphericalPoint s = cart_to_spherical(p);
    scatter_point(spec.lattice(), s.rho, s.theta, s.phi, field);
  }
  return field;
}

std::vector<double> compute_transmissions(std::span<const double> reflections,
                                          const Lattice3& lattice) {
  assert(reflections.size() == lattice.size());
  std::vector<double> q(reflections.size(), 0.0);
  const std::size_t n0 = static_cast<std::size_t>(lattice.axes[0].count);
  parallel_for(lattice.column_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const double* r = reflections.data() + c * n0;
      double* out = q.data() + c * n0;
      double running = 0.0;
      for (std::size_t i = n0; i-- > 0;) {
        out[i] = running;
        running += r[i];
      }
    }
  });
  return q;
}

SphericalGrid map_frame(const SensorFrame& frame, const SphericalGridSpec& spec) {
  SphericalGrid grid{spec, scatter_reflections(frame, spec), {}};
  grid.transmissions = compute_transmissions(grid.reflections, spec.lattice());
  return grid;
}

}  // namespace evoc
