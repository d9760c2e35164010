// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evoc/aggregation.hpp"
#include "evoc/evidence.hpp"
#include "evoc/grid_spec.hpp"

namespace evoc::io {

/// Spherical binning as written in configuration files (angles in degrees).
struct SphericalSettings {
  double rho_min = 2.5;
  double rho_max = 60.0;
  double d_rho = 0.1;
  double theta_min_deg = 75.0;
  double theta_max_deg = 125.0;
  double d_theta_deg = 0.5;
  double phi_min_deg = -180.0;
  double phi_max_deg = 180.0;
  double d_phi_deg = 0.5;

  SphericalGridSpec spec() const;
};

struct CartesianSettings {
  std::array<double, 3> min{-40.0, -40.0, -1.0};
  std::array<double, 3> max{40.0, 40.0, 5.4};
  double voxel_size = 0.2;

  CartesianGridSpec spec() const;
};

/// A (counts grid, scan) pair scored by `sweep`. Without `reference_scan`
/// the grid is assumed to sit at the scan's own ego pose.
struct EvaluationEntry {
  std::filesystem::path counts;
  std::filesystem::path scan;
  std::optional<std::filesystem::path> reference_scan;
};

/// Pipeline parameters. Every key is optional in the file; omitted keys take
/// the defaults below, which are the reference parameter set:
///
///   {
///     "spherical": {"rho_min": 2.5, "rho_max": 60, "d_rho": 0.1,
///                   "theta_min_deg": 75, "theta_max_deg": 125, "d_theta_deg": 0.5,
///                   "phi_min_deg": -180, "phi_max_deg": 180, "d_phi_deg": 0.5},
///     "cartesian": {"min": [-40, -40, -1], "max": [40, 40, 5.4], "voxel_size": 0.2},
///     "p_fn": 0.8, "p_fp": 0.2,
///     "max_frames": 50, "max_displacement": 20,
///     "compensate_object_motion": true,
///     "evaluation": [{"counts": "...", "scan": "...", "reference_scan": "..."}]
///   }
///
/// When p_fn and p_fp are both omitted they follow the voxel size
/// ((0.9, 0.1) at 0.4 m, (0.8, 0.2) otherwise).
struct RunConfig {
  SphericalSettings spherical;
  CartesianSettings cartesian;
  std::optional<double> p_fn;
  std::optional<double> p_fp;
  int max_frames = 50;
  double max_displacement = 20.0;
  bool compensate_object_motion = true;
  std::vector<EvaluationEntry> evaluation;

  SensorModel sensor_model() const;
  AggregationConfig aggregation(double reference_timestamp) const;
  AggregationOptions options() const { return {compensate_object_motion}; }

  /// Builds every derived spec and model once; throws ValidationError on the
  /// first invalid value.
  void validate() const;
};

/// Relative evaluation paths are kept as written; resolve them against the
/// config file's directory.
RunConfig parse_run_config(const std::string& text);
std::string format_run_config(const RunConfig& config);

RunConfig read_run_config(const std::filesystem::path& path);
void write_run_config(const std::filesystem::path& path, const RunConfig& config);

}  // namespace evoc::io
