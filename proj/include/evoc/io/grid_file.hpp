// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>

#include "evoc/aggregation.hpp"
#include "evoc/evidence.hpp"

namespace evoc::io {

/// Voxel grid file, little-endian:
///
///   "EVGR" | u32 version | u32 kind
///   | 7 x f64 grid spec (min x y z, max x y z, voxel size)
///   | payload in voxel index order (x slowest, z fastest)
///
/// Payload per kind:
///   counts     2 x f32 (reflections, transmissions)
///   belief     3 x f32 (m_o, m_f, m_Omega)
///   occupancy  1 bit, packed LSB first, last byte zero-padded
///   targets    2 x f32 (target probability, weight)
///
/// The number of aggregated frames is not part of the format; counts grids
/// read back with frame_count = 0.
inline constexpr std::uint32_t kGridFormatVersion = 1;

enum class GridKind : std::uint32_t {
  kCounts = 1,
  kBelief = 2,
  kOccupancy = 3,
  kTargets = 4,
};

const char* to_string(GridKind kind);

/// Per-voxel mass sums must equal one within this tolerance on read.
inline constexpr double kMassSumTolerance = 1e-6;

using AnyGrid = std::variant<AggregatedGrid, BeliefGrid, OccupancyGrid, TrainingTargets>;

std::string encode_grid(const AggregatedGrid& grid);
std::string encode_grid(const BeliefGrid& grid);
std::string encode_grid(const OccupancyGrid& grid);
std::string encode_grid(const TrainingTargets& grid);

/// Throws InputError for structural problems (magic, version, kind, size) and
/// ValidationError for values that violate the kind's invariants.
AnyGrid decode_grid(std::span<const char> bytes, const std::string& what = "grid");

GridKind kind_of(const AnyGrid& grid);

template <typename Grid>
void write_grid(const std::filesystem::path& path, const Grid& grid);

AnyGrid read_grid(const std::filesystem::path& path);

/// Typed readers; throw InputError when the file holds another kind.
AggregatedGrid read_counts(const std::filesystem::path& path);
BeliefGrid read_belief(const std::filesystem::path& path);
OccupancyGrid read_occupancy(const std::filesystem::path& path);
TrainingTargets read_targets(const std::filesystem::path& path);

/// Counts as they come back from a file (single-precision rounding). Running
/// later stages on this keeps in-process and file-based runs identical.
AggregatedGrid round_trip_counts(const AggregatedGrid& grid);

}  // namespace evoc::io
