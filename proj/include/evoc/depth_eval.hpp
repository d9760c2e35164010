// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evoc/aggregation.hpp"
#include "evoc/evidence.hpp"
#include "evoc/sensor.hpp"

namespace evoc {

enum class RayOutcome { kHit, kMiss, kRejected };

struct TraceResult {
  RayOutcome outcome = RayOutcome::kMiss;
  double depth = 0.0;  // valid for kHit only

  bool hit() const { return outcome == RayOutcome::kHit; }
};

/// Walks the voxels pierced by the ray in visiting order and returns the
/// distance to the entry face of the first occupied voxel (0 when the origin
/// voxel itself is occupied). Rays starting outside the grid are rejected.
/// `direction` must be unit length. When the ray crosses an edge or corner,
/// the axis with the lowest index is advanced first.
TraceResult trace_ray(const OccupancyGrid& grid, const Vec3& origin, const Vec3& direction);

struct DepthSample {
  std::size_t ray_index = 0;
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
  double d_lidar = 0.0;
  std::optional<double> d_est;
  std::optional<double> d_min;
  std::optional<double> d_max;

  /// max(|d_max - d_est|, |d_est - d_min|); nullopt unless all three hit.
  std::optional<double> d_uncert() const;
  /// |d_est - d_lidar|; nullopt when d_est misses.
  std::optional<double> d_error() const;
};

struct RenderOptions {
  /// Skip the two bound renders (d_min, d_max); used by parameter sweeps.
  bool estimate_only = false;
};

/// Renders one depth triple per LIDAR point. `grid_pose` maps the grid frame
/// (the reference vehicle frame) to world coordinates; rays are expressed in
/// the grid frame through scan.ego_pose. Points whose end point or sensor
/// origin lies outside the grid are skipped. ray_index is the point's index
/// in the scan.
std::vector<DepthSample> render_depths(const BeliefGrid& belief, const SensorFrame& scan,
                                       const RigidTransform& grid_pose, RenderOptions options = {});

/// Same protocol on a precomputed binary grid: only d_est is filled.
std::vector<DepthSample> render_depths(const OccupancyGrid& occupancy, const SensorFrame& scan,
                                       const RigidTransform& grid_pose);

struct DepthMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double delta1 = 0.0;  // percent with max ratio < 1.25
  double delta2 = 0.0;  // < 1.25^2
  double delta3 = 0.0;  // < 1.25^3
  std::size_t hits = 0;
  std::size_t misses = 0;

  double miss_rate() const {
    const std::size_t total = hits + misses;
    return total ? static_cast<double>(misses) / static_cast<double>(total) : 0.0;
  }
};

/// Depth pair used for metrics; `estimate` is nullopt for a miss.
struct DepthPair {
  double reference = 0.0;
  std::optional<double> estimate;
};

/// Depths below this are clamped before taking logarithms.
inline constexpr double kMinLogDepth = 1e-3;

/// Standard depth metrics over hits; misses are only counted. Sums use fixed
/// pairwise order. Throws InputError when there is no hit.
DepthMetrics compute_metrics(std::span<const DepthPair> pairs);
DepthMetrics compute_metrics(std::span<const DepthSample> samples);

/// Fixed-order pairwise summation.
double pairwise_sum(std::span<const double> values);

struct SweepItem {
  const AggregatedGrid* counts = nullptr;
  const SensorFrame* scan = nullptr;
  RigidTransform grid_pose;
};

struct SweepRow {
  SensorModel model;
  DepthMetrics metrics;
  /// p_fn == p_fp: occupied and free masses coincide whenever q == r, so
  /// the ranking of this cell is not informative.
  bool degenerate = false;
};

/// For every sensor model: beliefs -> binarize -> render d_est -> metrics,
/// pooled over all items. Rows are sorted by ascending MAE (stable).
std::vector<SweepRow> sweep(std::span<const SensorModel> models, std::span<const SweepItem> items);

}  // namespace evoc
