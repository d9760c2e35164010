// SPDX-License-Identifier: Apache-2.0
#include "evoc/spherical_mapping.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

namespace evoc {
namespace {

// Unit bins in (rho, theta, phi) with boundaries at integers; one theta bin so
// the lattice is the 2-D rho x phi slice of the worked scattering example.
Lattice3 unit_slice() {
  return {{Axis::make(0.0, 7.0, 1.0), Axis::make(0.0, 1.0, 1.0), Axis::make(0.0, 3.0, 1.0)}};
}

double at(const std::vector<double>& f, const Lattice3& l, int rho, int phi) {
  return f[l.index(rho, 0, phi)];
}

// Overlap of [c - 1/2, c + 1/2] (bin units, centred coordinate c) with bin i.
double overlap(double c, int i) {
  const double lo = std::max(c - 0.5, static_cast<double>(i));
  const double hi = std::min(c + 0.5, static_cast<double>(i + 1));
  return std::max(0.0, hi - lo);
}

TEST(ScatterTest, PointAtBinCentreFillsOneBin) {
  const Lattice3 l = unit_slice();
  const std::vector<SphericalPoint> pts{{1.5, 0.5, 1.5}};
  const auto r = scatter_reflections(pts, l);
  EXPECT_DOUBLE_EQ(at(r, l, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(std::accumulate(r.begin(), r.end(), 0.0), 1.0);
}

TEST(ScatterTest, OffCentrePointSplitsBilinearly) {
  const Lattice3 l = unit_slice();
  const std::vector<SphericalPoint> pts{{3.9, 0.5, 1.7}};
  const auto r = scatter_reflections(pts, l);
  EXPECT_NEAR(at(r, l, 3, 1), 0.48, 1e-12);
  EXPECT_NEAR(at(r, l, 3, 2), 0.12, 1e-12);
  EXPECT_NEAR(at(r, l, 4, 1), 0.32, 1e-12);
  EXPECT_NEAR(at(r, l, 4, 2), 0.08, 1e-12);
}

TEST(ScatterTest, CornerPointSplitsIntoQuarters) {
  const Lattice3 l = unit_slice();
  const std::vector<SphericalPoint> pts{{6.0, 0.5, 1.0}};
  const auto r = scatter_reflections(pts, l);
  for (int rho : {5, 6}) {
    for (int phi : {0, 1}) EXPECT_DOUBLE_EQ(at(r, l, rho, phi), 0.25);
  }
}

TEST(ScatterTest, PointsOutsideExtentsDepositNothing) {
  const Lattice3 l = unit_slice();
  const std::vector<SphericalPoint> pts{{7.0, 0.5, 1.5}, {-0.1, 0.5, 1.5}, {3.0, 0.5, 3.2}};
  const auto r = scatter_reflections(pts, l);
  EXPECT_EQ(std::count(r.begin(), r.end(), 0.0), static_cast<long>(r.size()));
}

TEST(ScatterTest, BoundaryPointsDepositOnlyTheInsideFraction) {
  const Lattice3 l = unit_slice();
  // Box spans rho [6.3, 7.3]: 0.7 of it is inside.
  const std::vector<SphericalPoint> pts{{6.8, 0.5, 1.5}};
  const auto r = scatter_reflections(pts, l);
  EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), 0.7, 1e-12);
}

// Per-point analytic overlap oracle on random points of a 3-D lattice.
TEST(ScatterTest, MatchesOverlapOracle) {
  const Lattice3 l{{Axis::make(0.0, 6.0, 1.0), Axis::make(0.0, 4.0, 1.0),
                    Axis::make(0.0, 5.0, 1.0)}};
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u0(0.0, 6.0), u1(0.0, 4.0), u2(0.0, 5.0);
  std::vector<SphericalPoint> pts;
  for (int i = 0; i < 500; ++i) pts.push_back({u0(rng), u1(rng), u2(rng)});
  const auto r = scatter_reflections(pts, l);

  std::vector<double> oracle(l.size(), 0.0);
  double expected_mass = 0.0;
  for (const auto& p : pts) {
    const double c[3] = {p.rho - 0.5, p.theta - 0.5, p.phi - 0.5};
    for (int i0 = 0; i0 < 6; ++i0) {
      for (int i1 = 0; i1 < 4; ++i1) {
        for (int i2 = 0; i2 < 5; ++i2) {
          const double w = overlap(c[0] + 0.5, i0) * overlap(c[1] + 0.5, i1) *
                           overlap(c[2] + 0.5, i2);
          oracle[l.index(i0, i1, i2)] += w;
          expected_mass += w;
        }
      }
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], oracle[i], 1e-9) << i;
  EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), expected_mass, 1e-9);
}

TEST(TransmissionTest, WorkedColumn) {
  const Lattice3 l{{Axis::make(0.0, 7.0, 1.0), Axis::make(0.0, 1.0, 1.0),
                    Axis::make(0.0, 1.0, 1.0)}};
  const std::vector<double> r{0, 1, 0, 0.48, 0.32, 0.25, 0.25};
  const std::vector<double> expected{2.3, 1.3, 1.3, 0.82, 0.5, 0.25, 0};
  const auto q = compute_transmissions(r, l);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(q[i], expected[i], 1e-12) << i;
}

TEST(TransmissionTest, SingleFarReflection) {
  const Lattice3 l{{Axis::make(0.0, 5.0, 1.0), Axis::make(0.0, 1.0, 1.0),
                    Axis::make(0.0, 1.0, 1.0)}};
  const auto q = compute_transmissions(std::vector<double>{0, 0, 0, 0, 1}, l);
  EXPECT_EQ(q, (std::vector<double>{1, 1, 1, 1, 0}));
  const auto zero = compute_transmissions(std::vector<double>(5, 0.0), l);
  EXPECT_EQ(zero, std::vector<double>(5, 0.0));
}

TEST(TransmissionTest, MatchesBruteForceAndIsMonotone) {
  const Lattice3 l{{Axis::make(0.0, 40.0, 1.0), Axis::make(0.0, 6.0, 1.0),
                    Axis::make(0.0, 7.0, 1.0)}};
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> r(l.size());
  for (double& v : r) v = u(rng);
  const auto q = compute_transmissions(r, l);
  for (int i1 = 0; i1 < 6; ++i1) {
    for (int i2 = 0; i2 < 7; ++i2) {
      for (int i0 = 0; i0 < 40; ++i0) {
        double brute = 0.0;
        for (int k = i0 + 1; k < 40; ++k) brute += r[l.index(k, i1, i2)];
        EXPECT_NEAR(q[l.index(i0, i1, i2)], brute, 1e-9);
        if (i0 > 0) EXPECT_LE(q[l.index(i0, i1, i2)], q[l.index(i0 - 1, i1, i2)]);
      }
    }
  }
}

TEST(MapFrameTest, SinglePointAtBinCentre) {
  const SphericalGridSpec spec = SphericalGridSpec::defaults();
  const double rho = spec.rho().center(100);
  const double theta = spec.theta().center(50);
  const double phi = spec.phi().center(300);
  SensorFrame frame;
  frame.points.push_back(spherical_to_cart({rho, theta, phi}));
  const SphericalGrid g = map_frame(frame, spec);
  const Lattice3& l = spec.lattice();
  EXPECT_NEAR(g.reflections[l.index(100, 50, 300)], 1.0, 1e-9);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(g.transmissions[l.index(i, 50, 300)], 1.0, 1e-9);
  EXPECT_NEAR(g.transmissions[l.index(100, 50, 300)], 0.0, 1e-9);
}

TEST(MapFrameTest, EmptyFrameGivesZeroFields) {
  const SphericalGridSpec spec = SphericalGridSpec::make(2.5, 5.0, 1.0, 2.0, -1.0, 1.0, 0.1, 0.1,
                                                         0.1);
  const SphericalGrid g = map_frame(SensorFrame{}, spec);
  EXPECT_EQ(g.reflections, std::vector<double>(spec.bin_count(), 0.0));
  EXPECT_EQ(g.transmissions, std::vector<double>(spec.bin_count(), 0.0));
}

// Random 10k-point frame: deposited mass equals the number of points whose
// scatter box lies fully inside the extents, plus the partial boxes.
TEST(MapFrameTest, MassConservation) {
  const SphericalGridSpec spec = SphericalGridSpec::defaults();
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> rho(3.0, 59.0);
  std::uniform_real_distribution<double> theta(deg_to_rad(76.0), deg_to_rad(124.0));
  std::uniform_real_distribution<double> phi(deg_to_rad(-179.0), deg_to_rad(179.0));
  SensorFrame frame;
  for (int i = 0; i < 10000; ++i) frame.points.push_back(spherical_to_cart({rho(rng), theta(rng), phi(rng)}));
  const auto r = scatter_reflections(frame, spec);
  EXPECT_NEAR(std::accumulate(r.begin(), r.end(), 0.0), 10000.0, 1e-6);
}

TEST(MapFrameTest, IndependentOfWorkerCount) {
  const SphericalGridSpec spec = SphericalGridSpec::make(2.5, 20.0, 1.0, 2.0, -3.0, 3.0, 0.1,
                                                         0.02, 0.02);
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(-15.0, 15.0);
  SensorFrame frame;
  for (int i = 0; i < 5000; ++i) frame.points.emplace_back(u(rng), u(rng), 0.2 * u(rng));
  setenv("EVOC_THREADS", "1", 1);
  const SphericalGrid one = map_frame(frame, spec);
  setenv("EVOC_THREADS", "4", 1);
  const SphericalGrid four = map_frame(frame, spec);
  unsetenv("EVOC_THREADS");
  EXPECT_EQ(one.reflections, four.reflections);
  EXPECT_EQ(one.transmissions, four.transmissions);
}

}  // namespace
}  // namespace evoc
