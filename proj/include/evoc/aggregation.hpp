// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evoc/grid_spec.hpp"
#include "evoc/sensor.hpp"
#include "evoc/spherical_mapping.hpp"

namespace evoc {

struct AggregationConfig {
  int max_frames = 50;           // N_max
  double max_displacement = 20;  // delta_max, metres of ego translation
  double reference_timestamp = 0.0;

  void validate() const;
};

struct AggregationOptions {
  /// Warp voxels of annotated objects with their box motion. When false every
  /// voxel is treated as world-fixed background.
  bool compensate_object_motion = true;
};

/// Per-voxel reflections and transmissions averaged over `frame_count` frames,
/// on a grid expressed in the reference vehicle frame.
struct AggregatedGrid {
  CartesianGridSpec spec;
  std::vector<double> reflections;
  std::vector<double> transmissions;
  int frame_count = 0;
};

/// Index of the frame whose timestamp matches `t_ref` within 1e-6 s.
/// Throws InputError when no frame matches.
std::size_t find_reference_frame(std::span<const SensorFrame> frames, double t_ref);

/// Indices (ascending) of the frames used for aggregation: every frame whose
/// ego position lies strictly within max_displacement of the reference ego
/// position, thinned to at most max_frames by a uniform index stride anchored
/// at the reference frame. The reference frame is always included.
std::vector<std::size_t> select_frames(std::span<const SensorFrame> frames,
                                       const AggregationConfig& config);

/// Maps world positions of the object's points at t_ref to their world
/// positions at t: pose(t) * pose(t_ref)^-1. Throws InputError when either
/// pose is missing.
RigidTransform object_flow(const ObjectTrack& track, double t_ref, double t);

inline constexpr std::int32_t kBackground = -1;

/// Per-voxel index into `tracks`, or kBackground. A voxel belongs to a track
/// when its centre lies inside the track's box at t_ref; overlaps go to the
/// box whose centre is nearest (lowest index on exact ties). Voxel centres
/// are mapped to world coordinates with `reference_ego_pose`.
std::vector<std::int32_t> assign_voxels_to_objects(const CartesianGridSpec& spec,
                                                   std::span<const ObjectTrack> tracks,
                                                   double t_ref,
                                                   const RigidTransform& reference_ego_pose =
                                                       RigidTransform::identity());

/// Trilinear interpolation between bin centres. Neighbours outside the
/// lattice are dropped and the remaining weights renormalized per axis.
/// Returns nullopt when the coordinate lies outside the lattice extents.
std::optional<double> sample_trilinear(std::span<const double> field, const Lattice3& lattice,
                                       double c0, double c1, double c2);

/// Streaming accumulation of per-frame spherical evidence into the
/// reference-frame Cartesian grid. Frames are folded in call order; the
/// result is the running mean, so T identical frames reproduce one frame
/// bit for bit.
class Aggregator {
 public:
  Aggregator(const CartesianGridSpec& spec, const RigidTransform& reference_ego_pose,
             double reference_timestamp, std::span<const ObjectTrack> tracks,
             AggregationOptions options = {});

  /// `grid` must have been computed from `frame`.
  void add(const SphericalGrid& grid, const SensorFrame& frame);

  int frame_count() const { return frame_count_; }
  const std::vector<std::int32_t>& voxel_labels() const { return labels_; }

  /// Throws InputError when no frame was added.
  AggregatedGrid result() const;

 private:
  CartesianGridSpec spec_;
  RigidTransform reference_ego_pose_;
  double reference_timestamp_;
  std::vector<ObjectTrack> tracks_;
  AggregationOptions options_;
  std::vector<std::int32_t> labels_;
  std::vector<double> reflections_;
  std::vector<double> transmissions_;
  int frame_count_ = 0;
};

/// Aggregates precomputed per-frame grids (grids[i] belongs to frames[i]) over
/// the frames chosen by select_frames.
AggregatedGrid aggregate(std::span<const SphericalGrid> grids, std::span<const SensorFrame> frames,
                         std::span<const ObjectTrack> tracks, const CartesianGridSpec& spec,
                         const AggregationConfig& config, AggregationOptions options = {});

/// Same result as aggregate(), but maps each selected frame on the fly so that
/// only one spherical grid is alive at a time.
AggregatedGrid map_and_aggregate(std::span<const SensorFrame> frames,
                                 std::span<const ObjectTrack> tracks,
                                 const SphericalGridSpec& sph_spec,
                                 const CartesianGridSpec& cart_spec,
                                 const AggregationConfig& config, AggregationOptions options = {});

}  // namespace evoc
