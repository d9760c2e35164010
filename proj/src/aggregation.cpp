// SPDX-License-Identifier: Apache-2.0
#include "evoc/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "evoc/error.hpp"
#include "evoc/parallel.hpp"

namespace evoc {

void AggregationConfig::validate() const {
  if (max_frames < 1) throw ValidationError("max_frames must be >= 1");
  if (!(max_displacement > 0.0)) throw ValidationError("max_displacement must be positive");
}

std::size_t find_reference_frame(std::span<const SensorFrame> frames, double t_ref) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (std::abs(frames[i].timestamp - t_ref) <= ObjectTrack::kTimeTolerance) return i;
  }
  std::ostringstream msg;
  msg << "no frame with reference timestamp " << t_ref;
  throw InputError(msg.str());
}

std::vector<std::size_t> select_frames(std::span<const SensorFrame> frames,
                                       const AggregationConfig& config) {
  config.validate();
  const std::size_t ref = find_reference_frame(frames, config.reference_timestamp);
  const Vec3 ref_position = frames[ref].ego_pose.translation();

  std::vector<std::size_t> eligible;
  std::size_t ref_slot = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i == ref) ref_slot = eligible.size();
    if (i == ref ||
        (frames[i].ego_pose.translation() - ref_position).norm() < config.max_displacement) {
      eligible.push_back(i);
    }
  }
  const auto limit = static_cast<std::size_t>(config.max_frames);
  if (eligible.size() <= limit) return eligible;

  const std::size_t stride = (eligible.size() + limit - 1) / limit;
  std::vector<std::size_t> selected;
  for (std::size_t k = ref_slot % stride; k < eligible.size(); k += stride) {
    selected.push_back(eligible[k]);
  }
  return selected;
}

RigidTransform object_flow(const ObjectTrack& track, double t_ref, double t) {
  const RigidTransform* at_ref = track.pose_at(t_ref);
  const RigidTransform* at_t = track.pose_at(t);
  if (!at_ref || !at_t) {
    std::ostringstream msg;
    msg << "object '" << track.id() << "' has no pose at t=" << (at_ref ? t : t_ref);
    throw InputError(msg.str());
  }
  return compose(*at_t, at_ref->inverse());
}

std::vector<std::int32_t> assign_voxels_to_objects(const CartesianGridSpec& spec,
                                                   std::span<const ObjectTrack> tracks,
                                                   double t_ref,
                                                   const RigidTransform& reference_ego_pose) {
  std::vector<std::int32_t> labels(spec.voxel_count(), kBackground);
  std::vector<double> best(labels.size(), std::numeric_limits<double>::infinity());

  for (std::size_t k = 0; k < tracks.size(); ++k) {
    const ObjectTrack& track = tracks[k];
    const RigidTransform* pose = track.pose_at(t_ref);
    if (!pose) continue;
    // Box pose expressed in the grid frame.
    const RigidTransform grid_to_box = compose(pose->inverse(), reference_ego_pose);
    const AffineMap to_local(grid_to_box);
    const Vec3 box_center = compose(reference_ego_pose.inverse(), *pose).translation();

    // Voxel range covering the box's grid-frame bounding box.
    const Eigen::Matrix3d rot = compose(reference_ego_pose.inverse(), *pose).rotation_matrix();
    const Vec3 half_extent = rot.cwiseAbs() * (0.5 * track.size());
    std::array<int, 3> lo{}, hi{};
    bool empty = false;
    for (int a = 0; a < 3; ++a) {
      const Axis& axis = spec.axis(a);
      lo[a] = std::max(0, axis.floor_index(box_center[a] - half_extent[a]) - 1);
      hi[a] = std::min(axis.count - 1, axis.floor_index(box_center[a] + half_extent[a]) + 1);
      if (lo[a] > hi[a]) empty = true;
    }
    if (empty) continue;

    for (int ix = lo[0]; ix <= hi[0]; ++ix) {
      for (int iy = lo[1]; iy <= hi[1]; ++iy) {
        for (int iz = lo[2]; iz <= hi[2]; ++iz) {
          const Vec3 c = spec.center(ix, iy, iz);
          if (!track.contains_local(to_local(c))) continue;
          const std::size_t v = spec.index(ix, iy, iz);
          const double d = (c - box_center).norm();
          if (d < best[v]) {
            best[v] = d;
            labels[v] = static_cast<std::int32_t>(k);
          }
        }
      }
    }
  }
  return labels;
}

namespace {

struct AxisWeights {
  int index[2];
  double weight[2];
};

// Neighbouring bin centres around coordinate v; out-of-range neighbours get
// zero weight and the remaining weight is renormalized to one.
inline AxisWeights interpolation_weights(const Axis& axis, double v) {
  const double u = axis.center_coordinate(v);
  const double base = std::floor(u);
  const double frac = u - base;
  const int i = static_cast<int>(base);
  AxisWeights w{{i, i + 1}, {1.0 - frac, frac}};
  if (i < 0) {
    w.index[0] = 0;
    w.weight[0] = 0.0;
    w.weight[1] = 1.0;
  } else if (i + 1 >= axis.count) {
    w.index[1] = i;
    w.weight[1] = 0.0;
    w.weight[0] = 1.0;
  }
  return w;
}

struct Sample {
  double r;
  double q;
};

// Interpolates two fields sharing one lattice. Caller guarantees that the
// coordinate lies inside the lattice extents.
inline Sample interpolate_pair(const double* r, const double* q, const Lattice3& lattice,
                               double c0, double c1, double c2) {
  const AxisWeights w0 = interpolation_weights(lattice.axes[0], c0);
  const AxisWeights w1 = interpolation_weights(lattice.axes[1], c1);
  const AxisWeights w2 = interpolation_weights(lattice.axes[2], c2);
  Sample s{0.0, 0.0};
  for (int k2 = 0; k2 < 2; ++k2) {
    if (w2.weight[k2] == 0.0) continue;
    for (int k1 = 0; k1 < 2; ++k1) {
      if (w1.weight[k1] == 0.0) continue;
      const double w12 = w2.weight[k2] * w1.weight[k1];
      const std::size_t base = lattice.index(0, w1.index[k1], w2.index[k2]);
      for (int k0 = 0; k0 < 2; ++k0) {
        if (w0.weight[k0] == 0.0) continue;
        const double w = w12 * w0.weight[k0];
        const std::size_t idx = base + static_cast<std::size_t>(w0.index[k0]);
        s.r += w * r[idx];
        s.q += w * q[idx];
      }
    }
  }
  return s;
}

}  // namespace

std::optional<double> sample_trilinear(std::span<const double> field, const Lattice3& lattice,
                                       double c0, double c1, double c2) {
  if (field.size() != lattice.size()) throw ValidationError("field does not match lattice");
  if (!lattice.contains(c0, c1, c2)) return std::nullopt;
  return interpolate_pair(field.data(), field.data(), lattice, c0, c1, c2).r;
}

Aggregator::Aggregator(const CartesianGridSpec& spec, const RigidTransform& reference_ego_pose,
                       double reference_timestamp, std::span<const ObjectTrack> tracks,
                       AggregationOptions options)
    : spec_(spec),
      reference_ego_pose_(reference_ego_pose),
      reference_timestamp_(reference_timestamp),
      tracks_(tracks.begin(), tracks.end()),
      options_(options),
      reflections_(spec.voxel_count(), 0.0),
      transmissions_(spec.voxel_count(), 0.0) {
  if (options_.compensate_object_motion && !tracks_.empty()) {
    labels_ = assign_voxels_to_objects(spec_, tracks_, reference_timestamp_, reference_ego_pose_);
  } else {
    labels_.assign(spec_.voxel_count(), kBackground);
  }
}

void Aggregator::add(const SphericalGrid& grid, const SensorFrame& frame) {
  if (grid.reflections.size() != grid.spec.bin_count() ||
      grid.transmissions.size() != grid.spec.bin_count()) {
    throw ValidationError("spherical grid fields do not match their spec");
  }
  const RigidTransform world_to_sensor = frame.ego_pose.inverse();
  const AffineMap background(compose(world_to_sensor, reference_ego_pose_));

  // One warp per track; tracks without a pose at this frame (or at t_ref)
  // see nothing in it.
  std::vector<std::optional<AffineMap>> object_maps(tracks_.size());
  for (std::size_t k = 0; k < tracks_.size(); ++k) {
    const ObjectTrack& track = tracks_[k];
    if (track.pose_at(reference_timestamp_) && track.pose_at(frame.timestamp)) {
      const RigidTransform flow = object_flow(track, reference_timestamp_, frame.timestamp);
      object_maps[k].emplace(compose(world_to_sensor, compose(flow, reference_ego_pose_)));
    }
  }

  ++frame_count_;
  const double k = frame_count_;
  const Lattice3& lattice = grid.spec.lattice();
  const Axis& rho_axis = lattice.axes[0];
  const Axis& theta_axis = lattice.axes[1];
  const double d_rho = rho_axis.step;
  const double d_theta = theta_axis.step;
  const double d_phi = lattice.axes[2].step;
  const double cart_volume = spec_.voxel_volume();
  const double* r_field = grid.reflections.data();
  const double* q_field = grid.transmissions.data();
  const int ny = spec_.y().count;
  const int nz = spec_.z().count;

  parallel_for(static_cast<std::size_t>(spec_.x().count), [&](std::size_t x0, std::size_t x1) {
    for (auto ix = static_cast<int>(x0); ix < static_cast<int>(x1); ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        for (int iz = 0; iz < nz; ++iz) {
          const std::size_t v = spec_.index(ix, iy, iz);
          const std::int32_t label = labels_[v];
          const AffineMap* warp = &background;
          if (label != kBackground) {
            warp = object_maps[label] ? &*object_maps[label] : nullptr;
          }
          double r = 0.0;
          double q = 0.0;
          if (warp) {
            const Vec3 p = (*warp)(spec_.center(ix, iy, iz));
            const double rho = p.norm();
            if (rho_axis.contains(rho)) {
              const double theta = std::acos(std::clamp(p.z() / rho, -1.0, 1.0));
              const double phi = std::atan2(p.y(), p.x());
              if (lattice.contains(rho, theta, phi)) {
                const Sample s = interpolate_pair(r_field, q_field, lattice, rho, theta, phi);
                const double ratio =
                    cart_volume / spherical_cell_volume(rho, theta, d_rho, d_theta, d_phi);
                r = s.r * ratio;
                q = s.q * ratio;
              }
            }
          }
          reflections_[v] += (r - reflections_[v]) / k;
          transmissions_[v] += (q - transmissions_[v]) / k;
        }
      }
    }
  });
}

AggregatedGrid Aggregator::result() const {
  if (frame_count_ == 0) throw InputError("no frames were aggregated");
  return {spec_, reflections_, transmissions_, frame_count_};
}

namespace {

void check_lengths(std::size_t grids, std::size_t frames) {
  if (grids != frames) throw InputError("need exactly one spherical grid per frame");
}

}  // namespace

AggregatedGrid aggregate(std::span<const SphericalGrid> grids, std::span<const SensorFrame> frames,
                         std::span<const ObjectTrack> tracks, const CartesianGridSpec& spec,
                         const AggregationConfig& config, AggregationOptions options) {
  check_lengths(grids.size(), frames.size());
  const auto selected = select_frames(frames, config);
  if (selected.empty()) throw InputError("frame selection is empty");
  const std::size_t ref = find_reference_frame(frames, config.reference_timestamp);
  for (std::size_t i : selected) {
    if (!(grids[i].spec == grids[ref].spec)) {
      throw InputError("all spherical grids must share one spec");
    }
  }
  Aggregator acc(spec, frames[ref].ego_pose, frames[ref].timestamp, tracks, options);
  for (std::size_t i : selected) acc.add(grids[i], frames[i]);
  return acc.result();
}

AggregatedGrid map_and_aggregate(std::span<const SensorFrame> frames,
                                 std::span<const ObjectTrack> tracks,
                                 const SphericalGridSpec& sph_spec,
                                 const CartesianGridSpec& cart_spec,
                                 const AggregationConfig& config, AggregationOptions options) {
  const auto selected = select_frames(frames, config);
  if (selected.empty()) throw InputError("frame selection is empty");
  const std::size_t ref = find_reference_frame(frames, config.reference_timestamp);
  Aggregator acc(cart_spec, frames[ref].ego_pose, frames[ref].timestamp, tracks, options);
  for (std::size_t i : selected) acc.add(map_frame(frames[i], sph_spec), frames[i]);
  return acc.result();
}

}  // namespace evoc
