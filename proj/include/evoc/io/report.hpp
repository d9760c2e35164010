// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "evoc/depth_eval.hpp"
#include "evoc/grid_spec.hpp"

namespace evoc::io {

/// Per-ray depth table, one row per retained ray:
///
///   ray_index,d_lidar,d_est,d_min,d_max,d_uncert,d_error,miss
///
/// Numbers use the shortest representation that reads back exactly; an empty
/// field marks a value that is undefined for the ray (for example d_est of a
/// miss). `miss` is 1 when the estimate ray left the grid without a hit.
std::string format_depth_csv(std::span<const DepthSample> samples);

/// Reads ray_index, d_lidar, d_est, d_min and d_max back; ray geometry is not
/// stored and stays default. Throws InputError on malformed rows and on a
/// table without rows.
std::vector<DepthSample> parse_depth_csv(const std::string& text, const std::string& what = "csv");

void write_depth_csv(const std::filesystem::path& path, std::span<const DepthSample> samples);
std::vector<DepthSample> read_depth_csv(const std::filesystem::path& path);

/// {"mae", "rmse", "rmse_log", "delta1", "delta2", "delta3", "hits", "misses",
/// "miss_rate"}; deltas in percent.
std::string format_metrics_json(const DepthMetrics& metrics);

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB

  std::array<std::uint8_t, 3> at(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    return {pixels[i], pixels[i + 1], pixels[i + 2]};
  }
};

/// Signed errors are clipped to this many metres before colouring.
inline constexpr double kErrorColorLimit = 3.75;

/// Diverging red-white-blue scale: -limit is dark red (estimate too short),
/// 0 is near-white, +limit is dark blue (estimate too long).
std::array<std::uint8_t, 3> error_color(double signed_error);

inline constexpr std::array<std::uint8_t, 3> kNoRayColor{128, 128, 128};
inline constexpr std::array<std::uint8_t, 3> kMissColor{0, 0, 0};

/// Range-image view of d_est - d_lidar. Columns are azimuth bins of `binning`
/// (increasing azimuth to the right), rows are polar bins (top row looks
/// highest). Ray directions come from the scan points in sensor coordinates.
/// Pixels hit by several rays show their mean error; a pixel whose rays all
/// missed is black and a pixel without rays is grey.
RgbImage render_error_image(std::span<const DepthSample> samples, const SensorFrame& scan,
                            const SphericalGridSpec& binning);

/// Binary portable pixmap (P6).
std::string encode_ppm(const RgbImage& image);
void write_ppm(const std::filesystem::path& path, const RgbImage& image);

}  // namespace evoc::io
