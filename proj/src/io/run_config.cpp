// SPDX-License-Identifier: Apache-2.0
#include "evoc/io/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "io/json_util.hpp"

namespace evoc::io {

namespace fs = std::filesystem;
using nlohmann::json;

SphericalGridSpec SphericalSettings::spec() const {
  return SphericalGridSpec::make(rho_min, rho_max, deg_to_rad(theta_min_deg),
                                 deg_to_rad(theta_max_deg), deg_to_rad(phi_min_deg),
                                 deg_to_rad(phi_max_deg), d_rho, deg_to_rad(d_theta_deg),
                                 deg_to_rad(d_phi_deg));
}

CartesianGridSpec CartesianSettings::spec() const {
  return CartesianGridSpec::make({min[0], min[1], min[2]}, {max[0], max[1], max[2]}, voxel_size);
}

SensorModel RunConfig::sensor_model() const {
  if (p_fn.has_value() != p_fp.has_value()) {
    throw ValidationError("config: p_fn and p_fp must be given together");
  }
  SensorModel m = p_fn ? SensorModel{*p_fn, *p_fp}
                       : SensorModel::defaults_for_voxel_size(cartesian.voxel_size);
  m.validate();
  return m;
}

AggregationConfig RunConfig::aggregation(double reference_timestamp) const {
  AggregationConfig c{max_frames, max_displacement, reference_timestamp};
  c.validate();
  return c;
}

void RunConfig::validate() const {
  (void)spherical.spec();
  (void)cartesian.spec();
  (void)sensor_model();
  (void)aggregation(0.0);
}

namespace {

void read_if(const json& j, const char* key, double& out, const std::string& where) {
  if (j.contains(key)) out = detail::get_number(j, key, where);
}

void read_vec_if(const json& j, const char* key, std::array<double, 3>& out,
                 const std::string& where) {
  if (j.contains(key)) out = detail::number_array<3>(j.at(key), where + "." + key);
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  const json root = detail::parse_json(text, "config");
  detail::require_object(root, "config");
  detail::reject_unknown_keys(root,
                              {"spherical", "cartesian", "p_fn", "p_fp", "max_frames",
                               "max_displacement", "compensate_object_motion", "evaluation"},
                              "config");
  RunConfig c;
  if (root.contains("spherical")) {
    const json& s = root.at("spherical");
    const std::string w = "config.spherical";
    detail::require_object(s, w);
    detail::reject_unknown_keys(s,
                                {"rho_min", "rho_max", "d_rho", "theta_min_deg", "theta_max_deg",
                                 "d_theta_deg", "phi_min_deg", "phi_max_deg", "d_phi_deg"},
                                w);
    SphericalSettings& o = c.spherical;
    read_if(s, "rho_min", o.rho_min, w);
    read_if(s, "rho_max", o.rho_max, w);
    read_if(s, "d_rho", o.d_rho, w);
    read_if(s, "theta_min_deg", o.theta_min_deg, w);
    read_if(s, "theta_max_deg", o.theta_max_deg, w);
    read_if(s, "d_theta_deg", o.d_theta_deg, w);
    read_if(s, "phi_min_deg", o.phi_min_deg, w);
    read_if(s, "phi_max_deg", o.phi_max_deg, w);
    read_if(s, "d_phi_deg", o.d_phi_deg, w);
  }
  if (root.contains("cartesian")) {
    const json& s = root.at("cartesian");
    const std::string w = "config.cartesian";
    detail::require_object(s, w);
    detail::reject_unknown_keys(s, {"min", "max", "voxel_size"}, w);
    read_vec_if(s, "min", c.cartesian.min, w);
    read_vec_if(s, "max", c.cartesian.max, w);
    read_if(s, "voxel_size", c.cartesian.voxel_size, w);
  }
  if (root.contains("p_fn")) c.p_fn = detail::get_number(root, "p_fn", "config");
  if (root.contains("p_fp")) c.p_fp = detail::get_number(root, "p_fp", "config");
  if (root.contains("max_frames")) {
    const json& v = root.at("max_frames");
    if (!v.is_number_integer()) throw InputError("config.max_frames: expected an integer");
    c.max_frames = v.get<int>();
  }
  read_if(root, "max_displacement", c.max_displacement, "config");
  if (root.contains("compensate_object_motion")) {
    const json& v = root.at("compensate_object_motion");
    if (!v.is_boolean()) throw InputError("config.compensate_object_motion: expected a boolean");
    c.compensate_object_motion = v.get<bool>();
  }
  if (root.contains("evaluation")) {
    const json& items = root.at("evaluation");
    if (!items.is_array()) throw InputError("config.evaluation: expected an array");
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string w = "config.evaluation[" + std::to_string(i) + "]";
      detail::require_object(items[i], w);
      detail::reject_unknown_keys(items[i], {"counts", "scan", "reference_scan"}, w);
      EvaluationEntry e{detail::get_string(items[i], "counts", w),
                        detail::get_string(items[i], "scan", w), std::nullopt};
      if (items[i].contains("reference_scan")) {
        e.reference_scan = detail::get_string(items[i], "reference_scan", w);
      }
      c.evaluation.push_back(std::move(e));
    }
  }
  c.validate();
  return c;
}

std::string format_run_config(const RunConfig& c) {
  const SphericalSettings& s = c.spherical;
  json root = {
      {"spherical",
       {{"rho_min", s.rho_min},
        {"rho_max", s.rho_max},
        {"d_rho", s.d_rho},
        {"theta_min_deg", s.theta_min_deg},
        {"theta_max_deg", s.theta_max_deg},
        {"d_theta_deg", s.d_theta_deg},
        {"phi_min_deg", s.phi_min_deg},
        {"phi_max_deg", s.phi_max_deg},
        {"d_phi_deg", s.d_phi_deg}}},
      {"cartesian",
       {{"min", c.cartesian.min}, {"max", c.cartesian.max}, {"voxel_size", c.cartesian.voxel_size}}},
      {"max_frames", c.max_frames},
      {"max_displacement", c.max_displacement},
      {"compensate_object_motion", c.compensate_object_motion},
  };
  if (c.p_fn) root["p_fn"] = *c.p_fn;
  if (c.p_fp) root["p_fp"] = *c.p_fp;
  if (!c.evaluation.empty()) {
    json items = json::array();
    for (const auto& e : c.evaluation) {
      json item = {{"counts", e.counts.generic_string()}, {"scan", e.scan.generic_string()}};
      if (e.reference_scan) item["reference_scan"] = e.reference_scan->generic_string();
      items.push_back(std::move(item));
    }
    root["evaluation"] = std::move(items);
  }
  return root.dump(2) + "\n";
}

RunConfig read_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

void write_run_config(const fs::path& path, const RunConfig& config) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << format_run_config(config);
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace evoc::io
