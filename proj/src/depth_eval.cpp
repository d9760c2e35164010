// SPDX-License-Identifier: Apache-2.0
#include "evoc/depth_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evoc/error.hpp"
#include "evoc/parallel.hpp"

namespace evoc {

TraceResult trace_ray(const OccupancyGrid& grid, const Vec3& origin, const Vec3& direction) {
  const CartesianGridSpec& spec = grid.spec;
  const auto start = spec.voxel_of(origin);
  if (!start) return {RayOutcome::kRejected, 0.0};

  std::array<int, 3> cell = *start;
  std::array<int, 3> step{};
  std::array<double, 3> t_next{};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const Axis& axis = spec.axis(a);
    if (direction[a] > 0.0) {
      step[a] = 1;
      t_next[a] = (axis.lower(cell[a] + 1) - origin[a]) / direction[a];
    } else if (direction[a] < 0.0) {
      step[a] = -1;
      t_next[a] = (axis.lower(cell[a]) - origin[a]) / direction[a];
    } else {
      t_next[a] = kInf;
    }
  }

  if (grid.at(spec.index(cell[0], cell[1], cell[2]))) return {RayOutcome::kHit, 0.0};

  for (;;) {
    // Smallest t wins; strict comparisons keep the lower axis on ties.
    int a = 0;
    if (t_next[1] < t_next[a]) a = 1;
    if (t_next[2] < t_next[a]) a = 2;
    const double t_entry = t_next[a];
    if (!std::isfinite(t_entry)) return {RayOutcome::kMiss, 0.0};

    cell[a] += step[a];
    const Axis& axis = spec.axis(a);
    if (cell[a] < 0 || cell[a] >= axis.count) return {RayOutcome::kMiss, 0.0};
    // Boundary positions are recomputed from the index, so no drift builds up.
    t_next[a] = (axis.lower(step[a] > 0 ? cell[a] + 1 : cell[a]) - origin[a]) / direction[a];

    if (grid.at(spec.index(cell[0], cell[1], cell[2]))) {
      return {RayOutcome::kHit, std::max(0.0, t_entry)};
    }
  }
}

std::optional<double> DepthSample::d_uncert() const {
  if (!d_est || !d_min || !d_max) return std::nullopt;
  return std::max(std::abs(*d_max - *d_est), std::abs(*d_est - *d_min));
}

std::optional<double> DepthSample::d_error() const {
  if (!d_est) return std::nullopt;
  return std::abs(*d_est - d_lidar);
}

namespace {

std::optional<double> depth_of(const TraceResult& r) {
  if (r.hit()) return r.depth;
  return std::nullopt;
}

struct Ray {
  std::size_t index;
  Vec3 origin;
  Vec3 direction;
  double range;
};

// LIDAR rays in the grid frame whose origin and end point both lie inside
// the grid.
std::vector<Ray> retained_rays(const CartesianGridSpec& spec, const SensorFrame& scan,
                               const RigidTransform& grid_pose) {
  const RigidTransform sensor_to_grid = compose(grid_pose.inverse(), scan.ego_pose);
  const AffineMap to_grid(sensor_to_grid);
  const Vec3 origin = sensor_to_grid.translation();
  std::vector<Ray> rays;
  if (!spec.contains(origin)) return rays;
  rays.reserve(scan.points.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const Vec3& p = scan.points[i];
    const double range = p.norm();
    if (!(range > 0.0)) continue;
    if (!spec.contains(to_grid(p))) continue;
    rays.push_back({i, origin, sensor_to_grid.rotate(p / range), range});
  }
  return rays;
}

}  // namespace

std::vector<DepthSample> render_depths(const BeliefGrid& belief, const SensorFrame& scan,
                                       const RigidTransform& grid_pose, RenderOptions options) {
  const OccupancyGrid estimate = binarize(belief);
  std::optional<OccupancyBounds> bounds;
  if (!options.estimate_only) bounds = binarize_bounds(belief);

  const std::vector<Ray> rays = retained_rays(belief.spec, scan, grid_pose);
  std::vector<DepthSample> samples(rays.size());
  parallel_for(rays.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Ray& ray = rays[k];
      DepthSample& s = samples[k];
      s.ray_index = ray.index;
      s.origin = ray.origin;
      s.direction = ray.direction;
      s.d_lidar = ray.range;
      s.d_est = depth_of(trace_ray(estimate, ray.origin, ray.direction));
      if (bounds) {
        s.d_min = depth_of(trace_ray(bounds->occupied_bound, ray.origin, ray.direction));
        s.d_max = depth_of(trace_ray(bounds->free_bound, ray.origin, ray.direction));
      }
    }
  });
  return samples;
}

std::vector<DepthSample> render_depths(const OccupancyGrid& occupancy, const SensorFrame& scan,
                                       const RigidTransform& grid_pose) {
  const std::vector<Ray> rays = retained_rays(occupancy.spec, scan, grid_pose);
  std::vector<DepthSample> samples(rays.size());
  parallel_for(rays.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Ray& ray = rays[k];
      DepthSample& s = samples[k];
      s.ray_index = ray.index;
      s.origin = ray.origin;
      s.direction = ray.direction;
      s.d_lidar = ray.range;
      s.d_est = depth_of(trace_ray(occupancy, ray.origin, ray.direction));
    }
  });
  return samples;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

DepthMetrics compute_metrics(std::span<const DepthPair> pairs) {
  std::vector<double> abs_err, sq_err, sq_log_err, d1, d2, d3;
  DepthMetrics m;
  for (const DepthPair& p : pairs) {
    if (!p.estimate) {
      ++m.misses;
      continue;
    }
    const double est = *p.estimate;
    const double ref = p.reference;
    const double diff = est - ref;
    abs_err.push_back(std::abs(diff));
    sq_err.push_back(diff * diff);
    const double log_diff =
        std::log(std::max(est, kMinLogDepth)) - std::log(std::max(ref, kMinLogDepth));
    sq_log_err.push_back(log_diff * log_diff);
    const double ratio = std::max(est / ref, ref / est);
    d1.push_back(ratio < 1.25 ? 1.0 : 0.0);
    d2.push_back(ratio < 1.25 * 1.25 ? 1.0 : 0.0);
    d3.push_back(ratio < 1.25 * 1.25 * 1.25 ? 1.0 : 0.0);
  }
  m.hits = abs_err.size();
  if (m.hits == 0) throw InputError("no hit samples to evaluate");
  const double n = static_cast<double>(m.hits);
  m.mae = pairwise_sum(abs_err) / n;
  m.rmse = std::sqrt(pairwise_sum(sq_err) / n);
  m.rmse_log = std::sqrt(pairwise_sum(sq_log_err) / n);
  m.delta1 = 100.0 * pairwise_sum(d1) / n;
  m.delta2 = 100.0 * pairwise_sum(d2) / n;
  m.delta3 = 100.0 * pairwise_sum(d3) / n;
  return m;
}

DepthMetrics compute_metrics(std::span<const DepthSample> samples) {
  std::vector<DepthPair> pairs;
  pairs.reserve(samples.size());
  for (const DepthSample& s : samples) pairs.push_back({s.d_lidar, s.d_est});
  return compute_metrics(pairs);
}

std::vector<SweepRow> sweep(std::span<const SensorModel> models, std::span<const SweepItem> items) {
  if (models.empty()) throw InputError("sweep needs at least one sensor model");
  if (items.empty()) throw InputError("sweep needs at least one evaluation item");
  std::vector<SweepRow> rows;
  rows.reserve(models.size());
  for (const SensorModel& model : models) {
    model.validate();
    std::vector<DepthSample> pooled;
    for (const SweepItem& item : items) {
      const BeliefGrid belief = compute_beliefs(*item.counts, model);
      auto samples = render_depths(binarize(belief), *item.scan, item.grid_pose);
      pooled.insert(pooled.end(), samples.begin(), samples.end());
    }
    DepthMetrics metrics;
    const bool any_hit =
        std::any_of(pooled.begin(), pooled.end(), [](const DepthSample& d) { return d.d_est.has_value(); });
    if (any_hit) {
      metrics = compute_metrics(pooled);
    } else {
      // Nothing occupied along any ray: rank last instead of failing the sweep.
      constexpr double kInf = std::numeric_limits<double>::infinity();
      metrics = {kInf, kInf, kInf, 0.0, 0.0, 0.0, 0, pooled.size()};
    }
    rows.push_back({model, metrics, model.p_fn == model.p_fp});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.metrics.mae < b.metrics.mae; });
  return rows;
}

}  // namespace evoc
