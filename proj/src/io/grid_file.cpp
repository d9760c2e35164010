// SPDX-License-Identifier: Apache-2.0
#include "evoc/io/grid_file.hpp"

#include <cmath>

#include "io/bytes.hpp"

namespace evoc::io {

namespace {

constexpr std::string_view kMagic = "EVGR";

void put_header(detail::ByteWriter& w, GridKind kind, const CartesianGridSpec& spec,
                std::size_t payload) {
  w.reserve(4 + 4 + 4 + 7 * 8 + payload);
  w.put_bytes(kMagic);
  w.put_u32(kGridFormatVersion);
  w.put_u32(static_cast<std::uint32_t>(kind));
  const Vec3 lo = spec.min_corner();
  const Vec3 hi = spec.max_corner();
  for (double v : {lo.x(), lo.y(), lo.z(), hi.x(), hi.y(), hi.z(), spec.voxel_size()}) {
    w.put_f64(v);
  }
}

void require_payload(const detail::ByteReader& r, std::size_t expected) {
  if (r.remaining() != expected) {
    throw InputError(r.what() + ": payload is " + std::to_string(r.remaining()) +
                     " bytes, expected " + std::to_string(expected));
  }
}

void require_size(std::size_t actual, std::size_t expected, const char* name) {
  if (actual != expected) {
    throw ValidationError(std::string(name) + " has " + std::to_string(actual) +
                          " voxels, spec has " + std::to_string(expected));
  }
}

double unit_value(detail::ByteReader& r, std::size_t voxel, const char* name) {
  const double v = r.get_f32();
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(r.what() + ": " + name + " outside [0, 1] at voxel " +
                          std::to_string(voxel));
  }
  return v;
}

AggregatedGrid decode_counts(detail::ByteReader& r, const CartesianGridSpec& spec) {
  const std::size_t n = spec.voxel_count();
  require_payload(r, n * 2 * sizeof(float));
  AggregatedGrid g{spec, std::vector<double>(n), std::vector<double>(n), 0};
  for (std::size_t v = 0; v < n; ++v) {
    g.reflections[v] = r.get_f32();
    g.transmissions[v] = r.get_f32();
    if (!(g.reflections[v] >= 0.0) || !(g.transmissions[v] >= 0.0) ||
        !std::isfinite(g.reflections[v]) || !std::isfinite(g.transmissions[v])) {
      throw ValidationError(r.what() + ": invalid count at voxel " + std::to_string(v));
    }
  }
  return g;
}

BeliefGrid decode_belief(detail::ByteReader& r, const CartesianGridSpec& spec) {
  const std::size_t n = spec.voxel_count();
  require_payload(r, n * 3 * sizeof(float));
  BeliefGrid g{spec, std::vector<Masses>(n)};
  for (std::size_t v = 0; v < n; ++v) {
    Masses& m = g.masses[v];
    m.occupied = unit_value(r, v, "m_o");
    m.free = unit_value(r, v, "m_f");
    m.unknown = unit_value(r, v, "m_Omega");
    if (std::abs(m.occupied + m.free + m.unknown - 1.0) > kMassSumTolerance) {
      throw ValidationError(r.what() + ": masses do not sum to one at voxel " +
                            std::to_string(v));
    }
  }
  return g;
}

OccupancyGrid decode_occupancy(detail::ByteReader& r, const CartesianGridSpec& spec) {
  const std::size_t n = spec.voxel_count();
  require_payload(r, (n + 7) / 8);
  OccupancyGrid g{spec, std::vector<std::uint8_t>(n)};
  for (std::size_t base = 0; base < n; base += 8) {
    const std::uint8_t byte = r.get_u8();
    const std::size_t bits = std::min<std::size_t>(8, n - base);
    if (bits < 8 && (byte >> bits) != 0) {
      throw InputError(r.what() + ": nonzero padding bits");
    }
    for (std::size_t b = 0; b < bits; ++b) g.occupied[base + b] = (byte >> b) & 1u;
  }
  return g;
}

TrainingTargets decode_targets(detail::ByteReader& r, const CartesianGridSpec& spec) {
  const std::size_t n = spec.voxel_count();
  require_payload(r, n * 2 * sizeof(float));
  TrainingTargets g{spec, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t v = 0; v < n; ++v) {
    g.probability[v] = unit_value(r, v, "target probability");
    g.weight[v] = unit_value(r, v, "weight");
  }
  return g;
}

template <typename Grid>
Grid read_typed(const std::filesystem::path& path, GridKind expected) {
  AnyGrid any = read_grid(path);
  if (kind_of(any) != expected) {
    throw InputError(path.string() + ": holds a " + to_string(kind_of(any)) + " grid, expected " +
                     to_string(expected));
  }
  return std::get<Grid>(std::move(any));
}

}  // namespace

const char* to_string(GridKind kind) {
  switch (kind) {
    case GridKind::kCounts: return "counts";
    case GridKind::kBelief: return "belief";
    case GridKind::kOccupancy: return "occupancy";
    case GridKind::kTargets: return "targets";
  }
  return "unknown";
}

std::string encode_grid(const AggregatedGrid& grid) {
  const std::size_t n = grid.spec.voxel_count();
  require_size(grid.reflections.size(), n, "reflections");
  require_size(grid.transmissions.size(), n, "transmissions");
  detail::ByteWriter w;
  put_header(w, GridKind::kCounts, grid.spec, n * 8);
  for (std::size_t v = 0; v < n; ++v) {
    w.put_f32(static_cast<float>(grid.reflections[v]));
    w.put_f32(static_cast<float>(grid.transmissions[v]));
  }
  return w.bytes();
}

std::string encode_grid(const BeliefGrid& grid) {
  const std::size_t n = grid.spec.voxel_count();
  require_size(grid.masses.size(), n, "masses");
  detail::ByteWriter w;
  put_header(w, GridKind::kBelief, grid.spec, n * 12);
  for (const Masses& m : grid.masses) {
    w.put_f32(static_cast<float>(m.occupied));
    w.put_f32(static_cast<float>(m.free));
    w.put_f32(static_cast<float>(m.unknown));
  }
  return w.bytes();
}

std::string encode_grid(const OccupancyGrid& grid) {
  const std::size_t n = grid.spec.voxel_count();
  require_size(grid.occupied.size(), n, "occupancy");
  detail::ByteWriter w;
  put_header(w, GridKind::kOccupancy, grid.spec, (n + 7) / 8);
  for (std::size_t base = 0; base < n; base += 8) {
    std::uint8_t byte = 0;
    const std::size_t bits = std::min<std::size_t>(8, n - base);
    for (std::size_t b = 0; b < bits; ++b) {
      if (grid.occupied[base + b]) byte |= static_cast<std::uint8_t>(1u << b);
    }
    w.put_u8(byte);
  }
  return w.bytes();
}

std::string encode_grid(const TrainingTargets& grid) {
  const std::size_t n = grid.spec.voxel_count();
  require_size(grid.probability.size(), n, "probability");
  require_size(grid.weight.size(), n, "weight");
  detail::ByteWriter w;
  put_header(w, GridKind::kTargets, grid.spec, n * 8);
  for (std::size_t v = 0; v < n; ++v) {
    w.put_f32(static_cast<float>(grid.probability[v]));
    w.put_f32(static_cast<float>(grid.weight[v]));
  }
  return w.bytes();
}

AnyGrid decode_grid(std::span<const char> bytes, const std::string& what) {
  detail::ByteReader r(bytes, what);
  if (r.take_bytes(kMagic.size()) != kMagic) throw InputError(what + ": not a grid file");
  const std::uint32_t version = r.get_u32();
  if (version != kGridFormatVersion) {
    throw InputError(what + ": unsupported grid version " + std::to_string(version));
  }
  const std::uint32_t kind = r.get_u32();
  double s[7];
  for (double& v : s) v = r.get_f64();
  CartesianGridSpec spec;
  try {
    spec = CartesianGridSpec::make({s[0], s[1], s[2]}, {s[3], s[4], s[5]}, s[6]);
  } catch (const ValidationError& e) {
    throw InputError(what + ": bad grid spec: " + e.what());
  }
  switch (static_cast<GridKind>(kind)) {
    case GridKind::kCounts: return decode_counts(r, spec);
    case GridKind::kBelief: return decode_belief(r, spec);
    case GridKind::kOccupancy: return decode_occupancy(r, spec);
    case GridKind::kTargets: return decode_targets(r, spec);
  }
  throw InputError(what + ": unknown grid kind " + std::to_string(kind));
}

GridKind kind_of(const AnyGrid& grid) {
  static constexpr GridKind kinds[] = {GridKind::kCounts, GridKind::kBelief, GridKind::kOccupancy,
                                       GridKind::kTargets};
  return kinds[grid.index()];
}

template <typename Grid>
void write_grid(const std::filesystem::path& path, const Grid& grid) {
  detail::write_file(path, encode_grid(grid));
}

template void write_grid(const std::filesystem::path&, const AggregatedGrid&);
template void write_grid(const std::filesystem::path&, const BeliefGrid&);
template void write_grid(const std::filesystem::path&, const OccupancyGrid&);
template void write_grid(const std::filesystem::path&, const TrainingTargets&);

AnyGrid read_grid(const std::filesystem::path& path) {
  const std::vector<char> bytes = detail::read_file(path);
  return decode_grid(bytes, path.string());
}

AggregatedGrid read_counts(const std::filesystem::path& path) {
  return read_typed<AggregatedGrid>(path, GridKind::kCounts);
}
BeliefGrid read_belief(const std::filesystem::path& path) {
  return read_typed<BeliefGrid>(path, GridKind::kBelief);
}
OccupancyGrid read_occupancy(const std::filesystem::path& path) {
  return read_typed<OccupancyGrid>(path, GridKind::kOccupancy);
}
TrainingTargets read_targets(const std::filesystem::path& path) {
  return read_typed<TrainingTargets>(path, GridKind::kTargets);
}

AggregatedGrid round_trip_counts(const AggregatedGrid& grid) {
  AggregatedGrid out = grid;
  for (double& v : out.reflections) v = static_cast<float>(v);
  for (double& v : out.transmissions) v = static_cast<float>(v);
  return out;
}

}  // namespace evoc::io
