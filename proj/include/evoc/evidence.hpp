// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "evoc/aggregation.hpp"
#include "evoc/grid_spec.hpp"

namespace evoc {

/// Sensor characterisation used by the belief assignment: p_fn is the
/// probability of observing an occupied voxel as free, p_fp the probability
/// of observing a free voxel as occupied. Both must lie strictly in (0, 1).
struct SensorModel {
  double p_fn = 0.8;
  double p_fp = 0.2;

  /// (0.8, 0.2) for 0.2 m voxels; (0.9, 0.1) for 0.4 m voxels. Other voxel
  /// sizes fall back to the 0.2 m setting.
  static SensorModel defaults_for_voxel_size(double voxel_size);
  void validate() const;
};

/// Basic belief assignment over {occupied, free}. The empty set always
/// carries zero mass and is not stored.
struct Masses {
  double occupied = 0.0;
  double free = 0.0;
  double unknown = 1.0;  // mass on {occupied, free}
};

/// Counts above this are clamped; both exponentials have long since
/// saturated there.
inline constexpr double kMaxEvidenceCount = 1e6;

/// m(o) = p_fn^q (1 - p_fp^r), m(f) = p_fp^r (1 - p_fn^q), m(Omega) = rest.
/// Throws ValidationError for negative or non-finite counts.
Masses bba(double transmissions, double reflections, const SensorModel& model);

struct BeliefGrid {
  CartesianGridSpec spec;
  std::vector<Masses> masses;
};

struct OccupancyGrid {
  CartesianGridSpec spec;
  std::vector<std::uint8_t> occupied;  // 0 or 1 per voxel

  bool at(std::size_t v) const { return occupied[v] != 0; }
};

/// Pessimistic (uncertainty counted as occupied) and optimistic (uncertainty
/// counted as free) binarizations.
struct OccupancyBounds {
  OccupancyGrid occupied_bound;  // m_o + m_Omega > m_f
  OccupancyGrid free_bound;      // m_o > m_f + m_Omega
};

struct TrainingTargets {
  CartesianGridSpec spec;
  std::vector<double> probability;  // m_o / (m_o + m_f), 0.5 where undefined
  std::vector<double> weight;       // 1 - m_Omega
};

BeliefGrid compute_beliefs(const AggregatedGrid& counts, const SensorModel& model);

/// Throws ValidationError if any voxel violates the mass constraints by more
/// than `tolerance`.
void validate_beliefs(const BeliefGrid& belief, double tolerance);

inline bool is_occupied(const Masses& m) { return m.occupied > m.free; }

/// o = 1 iff m_o > m_f; ties are free.
OccupancyGrid binarize(const BeliefGrid& belief);
OccupancyBounds binarize_bounds(const BeliefGrid& belief);
TrainingTargets training_targets(const BeliefGrid& belief);

}  // namespace evoc
