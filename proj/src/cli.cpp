// SPDX-License-Identifier: Apache-2.0
#include "evoc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evoc/aggregation.hpp"
#include "evoc/depth_eval.hpp"
#include "evoc/error.hpp"
#include "evoc/evidence.hpp"
#include "evoc/io/annotation.hpp"
#include "evoc/io/frame_file.hpp"
#include "evoc/io/grid_file.hpp"
#include "evoc/io/report.hpp"
#include "evoc/io/run_config.hpp"
#include "evoc/synth.hpp"

namespace evoc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Masses written by build-grid must satisfy the invariants well below the
/// file-format tolerance.
constexpr double kBeliefCheckTolerance = 1e-9;

io::RunConfig load_config(const std::string& path) {
  return path.empty() ? io::RunConfig{} : io::read_run_config(path);
}

fs::path default_counts_path(const fs::path& out) {
  fs::path p = out;
  const std::string ext = out.has_extension() ? out.extension().string() : ".evgr";
  p.replace_filename(out.stem().string() + ".counts" + ext);
  return p;
}

std::vector<double> parse_probability_list(const std::string& text, const char* name) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InputError(std::string(name) + ": bad value \"" + item + "\"");
    }
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError(std::string(name) + ": " + item + " is not inside (0, 1)");
    }
    values.push_back(v);
  }
  if (values.empty()) throw InputError(std::string(name) + ": empty list");
  return values;
}

struct BuildGridArgs {
  std::string config;
  std::string annotations;
  double t_ref = 0.0;
  std::string out;
  std::string out_counts;
};

void build_grid(const BuildGridArgs& a, std::ostream& out) {
  const io::RunConfig config = load_config(a.config);
  const fs::path ann_path = a.annotations;
  const io::Annotation ann = io::read_annotation(ann_path);
  const std::vector<SensorFrame> frames = io::load_frames(ann, ann_path.parent_path());

  const AggregationConfig agg = config.aggregation(a.t_ref);
  const std::size_t used = select_frames(frames, agg).size();
  // Belief masses are computed from the counts exactly as stored, so that
  // later stages reading the counts file see the same numbers.
  const AggregatedGrid counts = io::round_trip_counts(
      map_and_aggregate(frames, ann.tracks, config.spherical.spec(), config.cartesian.spec(), agg,
                        config.options()));
  const BeliefGrid belief = compute_beliefs(counts, config.sensor_model());
  validate_beliefs(belief, kBeliefCheckTolerance);

  const fs::path counts_path = a.out_counts.empty() ? default_counts_path(a.out) : fs::path(a.out_counts);
  io::write_grid(counts_path, counts);
  io::write_grid(a.out, belief);

  std::size_t occupied = 0;
  for (const Masses& m : belief.masses) occupied += is_occupied(m) ? 1 : 0;
  out << json{{"frames_used", used},
              {"voxels", belief.masses.size()},
              {"occupied_voxels", occupied},
              {"belief", a.out},
              {"counts", counts_path.string()}}
             .dump(2)
      << "\n";
}

struct RenderArgs {
  std::string grid;
  std::string scan;
  std::string reference_scan;
  std::string out_csv;
  std::string out_image;
  std::string config;
};

void render_depth(const RenderArgs& a, std::ostream& out) {
  const io::RunConfig config = load_config(a.config);
  const SensorFrame scan = io::read_frame(a.scan);
  const RigidTransform grid_pose =
      a.reference_scan.empty() ? scan.ego_pose : io::read_frame(a.reference_scan).ego_pose;

  const io::AnyGrid grid = io::read_grid(a.grid);
  std::vector<DepthSample> samples;
  if (const auto* belief = std::get_if<BeliefGrid>(&grid)) {
    samples = render_depths(*belief, scan, grid_pose);
  } else if (const auto* occ = std::get_if<OccupancyGrid>(&grid)) {
    samples = render_depths(*occ, scan, grid_pose);
  } else {
    throw InputError(a.grid + ": render-depth needs a belief or occupancy grid, got " +
                     io::to_string(io::kind_of(grid)));
  }

  io::write_depth_csv(a.out_csv, samples);
  if (!a.out_image.empty()) {
    io::write_ppm(a.out_image, io::render_error_image(samples, scan, config.spherical.spec()));
  }

  std::size_t hits = 0;
  for (const auto& s : samples) hits += s.d_est ? 1 : 0;
  json summary = {{"rays", samples.size()}, {"hits", hits}, {"misses", samples.size() - hits}};
  if (hits > 0) summary["metrics"] = json::parse(io::format_metrics_json(compute_metrics(samples)));
  out << summary.dump(2) << "\n";
}

void metrics(const std::vector<std::string>& csvs, const std::string& out_path, std::ostream& out) {
  std::vector<DepthSample> pooled;
  for (const auto& path : csvs) {
    std::vector<DepthSample> rows = io::read_depth_csv(path);
    pooled.insert(pooled.end(), rows.begin(), rows.end());
  }
  const std::string text = io::format_metrics_json(compute_metrics(pooled));
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::trunc);
    if (!f || !(f << text)) throw InputError("cannot write " + out_path);
  }
  out << text;
}

void export_targets(const std::string& grid, const std::string& out_path, std::ostream& out) {
  const TrainingTargets targets = training_targets(io::read_belief(grid));
  io::write_grid(out_path, targets);
  std::size_t weighted = 0;
  for (double w : targets.weight) weighted += w > 0.0 ? 1 : 0;
  out << json{{"voxels", targets.weight.size()}, {"weighted_voxels", weighted}}.dump(2) << "\n";
}

struct SweepArgs {
  std::string config;
  std::string p_fn_list;
  std::string p_fp_list;
  std::string out_csv;
  std::vector<std::string> counts;
  std::vector<std::string> scans;
  std::vector<std::string> reference_scans;
};

void sweep_command(const SweepArgs& a, std::ostream& out) {
  const io::RunConfig config = load_config(a.config);
  const std::vector<double> fns = parse_probability_list(a.p_fn_list, "--p-fn-list");
  const std::vector<double> fps = parse_probability_list(a.p_fp_list, "--p-fp-list");

  std::vector<io::EvaluationEntry> entries;
  if (!a.counts.empty() || !a.scans.empty()) {
    if (a.counts.size() != a.scans.size()) {
      throw InputError("sweep: every --counts needs a matching --scan");
    }
    if (!a.reference_scans.empty() && a.reference_scans.size() != a.scans.size()) {
      throw InputError("sweep: give --reference-scan for every --scan or for none");
    }
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
      io::EvaluationEntry e{a.counts[i], a.scans[i], std::nullopt};
      if (!a.reference_scans.empty()) e.reference_scan = a.reference_scans[i];
      entries.push_back(std::move(e));
    }
  } else {
    const fs::path base = fs::path(a.config).parent_path();
    for (io::EvaluationEntry e : config.evaluation) {
      const auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : base / p; };
      e.counts = resolve(e.counts);
      e.scan = resolve(e.scan);
      if (e.reference_scan) e.reference_scan = resolve(*e.reference_scan);
      entries.push_back(std::move(e));
    }
  }
  if (entries.empty()) {
    throw InputError("sweep: no evaluation data (use --counts/--scan or config \"evaluation\")");
  }

  std::vector<AggregatedGrid> grids;
  std::vector<SensorFrame> scans;
  std::vector<RigidTransform> poses;
  for (const auto& e : entries) {
    grids.push_back(io::read_counts(e.counts));
    scans.push_back(io::read_frame(e.scan));
    poses.push_back(e.reference_scan ? io::read_frame(*e.reference_scan).ego_pose
                                     : scans.back().ego_pose);
  }
  std::vector<SweepItem> items;
  for (std::size_t i = 0; i < entries.size(); ++i) items.push_back({&grids[i], &scans[i], poses[i]});

  std::vector<SensorModel> models;
  for (double fn : fns) {
    for (double fp : fps) models.push_back({fn, fp});
  }
  const std::vector<SweepRow> rows = sweep(models, items);

  std::ostringstream csv;
  csv << "rank,p_fn,p_fp,mae,rmse,rmse_log,delta1,delta2,delta3,hits,misses,miss_rate,degenerate\n";
  csv << std::setprecision(17);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    const DepthMetrics& m = r.metrics;
    csv << i + 1 << ',' << r.model.p_fn << ',' << r.model.p_fp << ',' << m.mae << ',' << m.rmse
        << ',' << m.rmse_log << ',' << m.delta1 << ',' << m.delta2 << ',' << m.delta3 << ','
        << m.hits << ',' << m.misses << ',' << m.miss_rate() << ',' << (r.degenerate ? 1 : 0)
        << '\n';
  }
  std::ofstream f(a.out_csv, std::ios::trunc);
  if (!f || !(f << csv.str())) throw InputError("cannot write " + a.out_csv);

  json best = nullptr;
  for (const SweepRow& r : rows) {
    if (!r.degenerate && std::isfinite(r.metrics.mae)) {
      best = {{"p_fn", r.model.p_fn}, {"p_fp", r.model.p_fp}, {"mae", r.metrics.mae}};
      break;
    }
  }
  out << json{{"cells", rows.size()}, {"best", best}}.dump(2) << "\n";
}

void simulate(const std::string& scene, const std::string& out_dir, std::ostream& out) {
  const synth::SuiteCase c = synth::suite_case(scene);
  const fs::path dir = out_dir;
  fs::create_directories(dir / "frames");

  io::Annotation ann;
  ann.sequence_id = "suite-" + c.name;
  const std::vector<SensorFrame> frames = c.simulate();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%06zu.evoc", i);
    const fs::path rel = fs::path("frames") / name;
    io::write_frame(dir / rel, frames[i]);
    ann.frames.push_back({frames[i].timestamp, rel});
  }
  ann.tracks = c.tracks();
  io::write_annotation(dir / "annotations.json", ann);
  out << json{{"scene", c.name},
              {"description", c.description},
              {"frames", frames.size()},
              {"reference_timestamp", c.reference_timestamp()},
              {"annotations", (dir / "annotations.json").string()}}
             .dump(2)
      << "\n";
}

int report_error(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evidential occupancy grids from aggregated LIDAR sweeps", "evoc"};
  app.require_subcommand(1);

  BuildGridArgs build;
  auto* build_cmd = app.add_subcommand("build-grid", "aggregate annotated sweeps into grids");
  build_cmd->add_option("--config", build.config, "run configuration (JSON)")->check(CLI::ExistingFile);
  build_cmd->add_option("--annotations", build.annotations, "annotation file (JSON)")->required();
  build_cmd->add_option("--t-ref", build.t_ref, "reference timestamp in seconds")->required();
  build_cmd->add_option("--out", build.out, "belief grid output")->required();
  build_cmd->add_option("--out-counts", build.out_counts,
                        "aggregated counts output (default: <out stem>.counts<ext>)");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render-depth", "render depths through a grid");
  render_cmd->add_option("--grid", render.grid, "belief or occupancy grid")->required();
  render_cmd->add_option("--scan", render.scan, "LIDAR frame to evaluate")->required();
  render_cmd->add_option("--reference-scan", render.reference_scan,
                         "frame whose ego pose anchors the grid (default: --scan)");
  render_cmd->add_option("--out-csv", render.out_csv, "per-ray depth table")->required();
  render_cmd->add_option("--out-image", render.out_image, "signed error image (PPM)");
  render_cmd->add_option("--config", render.config, "run configuration; sets image binning")
      ->check(CLI::ExistingFile);

  std::vector<std::string> metric_csvs;
  std::string metrics_out;
  auto* metrics_cmd = app.add_subcommand("metrics", "depth metrics over per-ray tables");
  metrics_cmd->add_option("--csv", metric_csvs, "per-ray table; repeat to pool")->required();
  metrics_cmd->add_option("--out", metrics_out, "also write the summary JSON here");

  std::string targets_grid;
  std::string targets_out;
  auto* targets_cmd = app.add_subcommand("export-targets", "training targets from a belief grid");
  targets_cmd->add_option("--grid", targets_grid, "belief grid")->required();
  targets_cmd->add_option("--out", targets_out, "targets grid output")->required();

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid search over sensor models");
  sweep_cmd->add_option("--config", sw.config, "run configuration")->check(CLI::ExistingFile);
  sweep_cmd->add_option("--p-fn-list", sw.p_fn_list, "comma-separated p_fn values")->required();
  sweep_cmd->add_option("--p-fp-list", sw.p_fp_list, "comma-separated p_fp values")->required();
  sweep_cmd->add_option("--out-csv", sw.out_csv, "metrics table")->required();
  sweep_cmd->add_option("--counts", sw.counts, "counts grid; repeat, paired with --scan");
  sweep_cmd->add_option("--scan", sw.scans, "LIDAR frame; repeat, paired with --counts");
  sweep_cmd->add_option("--reference-scan", sw.reference_scans,
                        "frame anchoring each counts grid; repeat per --scan");

  std::string scene;
  std::string out_dir;
  auto* sim_cmd = app.add_subcommand("simulate", "write a synthetic suite scene to disk");
  sim_cmd->add_option("--suite-scene", scene, "scene name (a, b, c or d)")->required();
  sim_cmd->add_option("--out-dir", out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "input", e.what(), kExitInput);
  }

  try {
    if (build_cmd->parsed()) build_grid(build, out);
    if (render_cmd->parsed()) render_depth(render, out);
    if (metrics_cmd->parsed()) metrics(metric_csvs, metrics_out, out);
    if (targets_cmd->parsed()) export_targets(targets_grid, targets_out, out);
    if (sweep_cmd->parsed()) sweep_command(sw, out);
    if (sim_cmd->parsed()) simulate(scene, out_dir, out);
  } catch (const ValidationError& e) {
    return report_error(err, "validation", e.what(), kExitValidation);
  } catch (const InputError& e) {
    return report_error(err, "input", e.what(), kExitInput);
  } catch (const Error& e) {
    return report_error(err, "input", e.what(), kExitInput);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, "input", e.what(), kExitInput);
  }
  return kExitOk;
}

}  // namespace evoc::cli
