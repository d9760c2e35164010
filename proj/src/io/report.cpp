// SPDX-License-Identifier: Apache-2.0
#include "evoc/io/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "io/bytes.hpp"

namespace evoc::io {

namespace {

constexpr const char* kCsvHeader = "ray_index,d_lidar,d_est,d_min,d_max,d_uncert,d_error,miss";

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_optional(std::string& out, const std::optional<double>& v) {
  out.push_back(',');
  if (v) append_number(out, *v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError(where + ": bad number \"" + std::string(s) + "\"");
  }
  return v;
}

std::optional<double> parse_optional(std::string_view s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, where);
}

// Control points of an 11-step red-white-blue diverging palette.
constexpr std::array<std::array<std::uint8_t, 3>, 11> kPalette{{
    {103, 0, 31},
    {178, 24, 43},
    {214, 96, 77},
    {244, 165, 130},
    {253, 219, 199},
    {247, 247, 247},
    {209, 229, 240},
    {146, 197, 222},
    {67, 147, 195},
    {33, 102, 172},
    {5, 48, 97},
}};

}  // namespace

std::string format_depth_csv(std::span<const DepthSample> samples) {
  std::string out = kCsvHeader;
  out.push_back('\n');
  for (const DepthSample& s : samples) {
    out += std::to_string(s.ray_index);
    out.push_back(',');
    append_number(out, s.d_lidar);
    append_optional(out, s.d_est);
    append_optional(out, s.d_min);
    append_optional(out, s.d_max);
    append_optional(out, s.d_uncert());
    append_optional(out, s.d_error());
    out += s.d_est ? ",0\n" : ",1\n";
  }
  return out;
}

std::vector<DepthSample> parse_depth_csv(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw InputError(what + ": missing or unexpected header");
  }
  std::vector<DepthSample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::string where = what + ":" + std::to_string(row);
    const auto f = split(line, ',');
    if (f.size() != 8) throw InputError(where + ": expected 8 fields");
    DepthSample s;
    std::uint64_t index = 0;
    const auto res = std::from_chars(f[0].data(), f[0].data() + f[0].size(), index);
    if (res.ec != std::errc() || res.ptr != f[0].data() + f[0].size()) {
      throw InputError(where + ": bad ray index");
    }
    s.ray_index = index;
    s.d_lidar = parse_double(f[1], where);
    s.d_est = parse_optional(f[2], where);
    s.d_min = parse_optional(f[3], where);
    s.d_max = parse_optional(f[4], where);
    (void)parse_optional(f[5], where);
    (void)parse_optional(f[6], where);
    if (f[7] != "0" && f[7] != "1") throw InputError(where + ": miss flag must be 0 or 1");
    if ((f[7] == "1") == s.d_est.has_value()) {
      throw InputError(where + ": miss flag disagrees with d_est");
    }
    samples.push_back(s);
  }
  if (samples.empty()) throw InputError(what + ": no rows");
  return samples;
}

void write_depth_csv(const std::filesystem::path& path, std::span<const DepthSample> samples) {
  detail::write_file(path, format_depth_csv(samples));
}

std::vector<DepthSample> read_depth_csv(const std::filesystem::path& path) {
  const std::vector<char> bytes = detail::read_file(path);
  return parse_depth_csv(std::string(bytes.begin(), bytes.end()), path.string());
}

std::string format_metrics_json(const DepthMetrics& m) {
  const nlohmann::json j = {{"mae", m.mae},
                            {"rmse", m.rmse},
                            {"rmse_log", m.rmse_log},
                            {"delta1", m.delta1},
                            {"delta2", m.delta2},
                            {"delta3", m.delta3},
                            {"hits", m.hits},
                            {"misses", m.misses},
                            {"miss_rate", m.miss_rate()}};
  return j.dump(2) + "\n";
}

std::array<std::uint8_t, 3> error_color(double signed_error) {
  const double e = std::clamp(signed_error, -kErrorColorLimit, kErrorColorLimit);
  const double pos = (e + kErrorColorLimit) / (2.0 * kErrorColorLimit) * (kPalette.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), kPalette.size() - 2);
  const double f = pos - static_cast<double>(i);
  std::array<std::uint8_t, 3> c{};
  for (int k = 0; k < 3; ++k) {
    const double v = (1.0 - f) * kPalette[i][k] + f * kPalette[i + 1][k];
    c[k] = static_cast<std::uint8_t>(std::lround(v));
  }
  return c;
}

RgbImage render_error_image(std::span<const DepthSample> samples, const SensorFrame& scan,
                            const SphericalGridSpec& binning) {
  RgbImage img;
  img.width = binning.phi().count;
  img.height = binning.theta().count;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<double> sum(n, 0.0);
  std::vector<int> hits(n, 0);
  std::vector<int> rays(n, 0);
  for (const DepthSample& s : samples) {
    if (s.ray_index >= scan.points.size()) {
      throw InputError("depth sample refers to ray " + std::to_string(s.ray_index) +
                       " beyond the scan's " + std::to_string(scan.points.size()) + " points");
    }
    const Vec3& p = scan.points[s.ray_index];
    if (p.isZero()) continue;
    const SphericalPoint sp = cart_to_spherical(p);
    const auto row = binning.theta().bin(sp.theta);
    const auto col = binning.phi().bin(sp.phi);
    if (!row || !col) continue;
    const std::size_t px = static_cast<std::size_t>(*row) * img.width + *col;
    ++rays[px];
    if (s.d_est) {
      sum[px] += *s.d_est - s.d_lidar;
      ++hits[px];
    }
  }
  img.pixels.resize(3 * n);
  for (std::size_t px = 0; px < n; ++px) {
    std::array<std::uint8_t, 3> c = kNoRayColor;
    if (hits[px] > 0) {
      c = error_color(sum[px] / hits[px]);
    } else if (rays[px] > 0) {
      c = kMissColor;
    }
    std::copy(c.begin(), c.end(), img.pixels.begin() + 3 * px);
  }
  return img;
}

std::string encode_ppm(const RgbImage& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& image) {
  detail::write_file(path, encode_ppm(image));
}

}  // namespace evoc::io
