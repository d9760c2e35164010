// SPDX-License-Identifier: Apache-2.0
#include "evoc/cli.hpp"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "evoc/io/frame_file.hpp"
#include "evoc/io/grid_file.hpp"
#include "evoc/io/report.hpp"

namespace evoc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// One simulated scene and one built grid shared by every test in the suite.
class CliTest : public ::testing::Test {
 protected:
  static inline fs::path dir;
  static inline std::string ref_scan;

  static void SetUpTestSuite() {
    dir = fs::temp_directory_path() / "evoc_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << R"({
  "spherical": {"rho_max": 20.0},
  "cartesian": {"min": [-14, -12, -1], "max": [14, 12, 3], "voxel_size": 0.2},
  "max_frames": 5
})";
    ASSERT_EQ(invoke({"simulate", "--suite-scene", "a", "--out-dir", (dir / "sim").string()}).code, 0);
    ref_scan = (dir / "sim" / "frames" / "000025.evoc").string();
    const Result r = build("grid.evgr");
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() { fs::remove_all(dir); }

  static Result build(const std::string& out) {
    return invoke({"build-grid", "--config", (dir / "config.json").string(), "--annotations",
                   (dir / "sim" / "annotations.json").string(), "--t-ref", "2.5", "--out",
                   (dir / out).string()});
  }
};

TEST_F(CliTest, SimulateWritesFramesAndAnnotation) {
  EXPECT_TRUE(fs::exists(dir / "sim" / "annotations.json"));
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir / "sim" / "frames")) n += e.is_regular_file();
  EXPECT_EQ(n, 50u);
  EXPECT_DOUBLE_EQ(io::read_frame(ref_scan).timestamp, 2.5);
}

TEST_F(CliTest, BuildGridWritesBeliefAndCounts) {
  EXPECT_EQ(io::kind_of(io::read_grid(dir / "grid.evgr")), io::GridKind::kBelief);
  EXPECT_EQ(io::kind_of(io::read_grid(dir / "grid.counts.evgr")), io::GridKind::kCounts);
}

TEST_F(CliTest, BuildGridIsDeterministic) {
  const Result r = build("again.evgr");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("frames_used"), 5);
  EXPECT_EQ(slurp(dir / "grid.evgr"), slurp(dir / "again.evgr"));
  EXPECT_EQ(slurp(dir / "grid.counts.evgr"), slurp(dir / "again.counts.evgr"));
}

// Observed voxels on the inner face of the wall straight ahead (x = 12.3 m)
// read as occupied.
TEST_F(CliTest, WallFaceIsOccupied) {
  const BeliefGrid belief = io::read_belief(dir / "grid.evgr");
  const AggregatedGrid counts = io::read_counts(dir / "grid.counts.evgr");
  const CartesianGridSpec& spec = belief.spec;
  const int ix = *spec.x().bin(12.3);
  std::size_t face = 0, occupied = 0;
  for (int iy = 0; iy < spec.y().count; ++iy) {
    for (int iz = 0; iz < spec.z().count; ++iz) {
      const Vec3 c = spec.center(spec.index(ix, iy, iz));
      if (std::abs(c.y()) > 6.0 || c.z() > 1.8) continue;
      const std::size_t v = spec.index(ix, iy, iz);
      if (counts.reflections[v] <= 0.0) continue;
      ++face;
      occupied += is_occupied(belief.masses[v]) ? 1 : 0;
    }
  }
  EXPECT_GT(face, 500u);
  EXPECT_GE(static_cast<double>(occupied), 0.99 * static_cast<double>(face));
}

TEST_F(CliTest, RenderMetricsAndTargets) {
  const std::string csv = (dir / "depth.csv").string();
  const Result r = invoke({"render-depth", "--grid", (dir / "grid.evgr").string(), "--scan", ref_scan,
                           "--out-csv", csv, "--out-image", (dir / "err.ppm").string(), "--config",
                           (dir / "config.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json summary = json::parse(r.out);
  EXPECT_GT(summary.at("hits").get<int>(), 5000);
  EXPECT_LT(summary.at("metrics").at("mae").get<double>(), 0.5);
  EXPECT_EQ(slurp(dir / "err.ppm").substr(0, 2), "P6");

  const Result m = invoke({"metrics", "--csv", csv, "--out", (dir / "m.json").string()});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_EQ(m.out, slurp(dir / "m.json"));
  EXPECT_DOUBLE_EQ(json::parse(m.out).at("mae").get<double>(),
                   summary.at("metrics").at("mae").get<double>());

  const Result t = invoke({"export-targets", "--grid", (dir / "grid.evgr").string(), "--out",
                           (dir / "targets.evgr").string()});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(io::kind_of(io::read_grid(dir / "targets.evgr")), io::GridKind::kTargets);
}

TEST_F(CliTest, SingleCellSweepMatchesDirectRender) {
  const std::string csv = (dir / "direct.csv").string();
  ASSERT_EQ(invoke({"render-depth", "--grid", (dir / "grid.evgr").string(), "--scan", ref_scan,
                    "--out-csv", csv})
                .code,
            0);
  const DepthMetrics direct = compute_metrics(io::read_depth_csv(csv));
  const std::string sweep_csv = (dir / "sweep.csv").string();
  const Result s = invoke({"sweep", "--config", (dir / "config.json").string(), "--p-fn-list", "0.8",
                           "--p-fp-list", "0.2", "--out-csv", sweep_csv, "--counts",
                           (dir / "grid.counts.evgr").string(), "--scan", ref_scan});
  ASSERT_EQ(s.code, 0) << s.err;
  std::istringstream lines(slurp(sweep_csv));
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::vector<std::string> cells;
  std::stringstream cs(row);
  for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
  ASSERT_EQ(cells.size(), 13u);
  EXPECT_EQ(cells[0], "1");
  EXPECT_NEAR(std::stod(cells[3]), direct.mae, 1e-12);
  EXPECT_EQ(std::stoul(cells[9]), direct.hits);
}

TEST_F(CliTest, SweepTableHasOneRowPerCell) {
  const std::string sweep_csv = (dir / "sweep3x2.csv").string();
  const Result s = invoke({"sweep", "--config", (dir / "config.json").string(), "--p-fn-list",
                           "0.6,0.7,0.8", "--p-fp-list", "0.2,0.3", "--out-csv", sweep_csv,
                           "--counts", (dir / "grid.counts.evgr").string(), "--scan", ref_scan});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(json::parse(s.out).at("cells"), 6);
  std::istringstream lines(slurp(sweep_csv));
  int n = 0;
  for (std::string l; std::getline(lines, l);) ++n;
  EXPECT_EQ(n, 7);
}

TEST_F(CliTest, ErrorsAreReportedAsJsonWithExitCodes) {
  const Result missing = invoke({"render-depth", "--grid", (dir / "nope.evgr").string(), "--scan",
                                 ref_scan, "--out-csv", (dir / "x.csv").string()});
  EXPECT_EQ(missing.code, 1);
  EXPECT_EQ(json::parse(missing.err).at("error").at("kind"), "input");

  const Result bad_prob = invoke({"sweep", "--p-fn-list", "1.5", "--p-fp-list", "0.2", "--out-csv",
                                  (dir / "x.csv").string(), "--counts",
                                  (dir / "grid.counts.evgr").string(), "--scan", ref_scan});
  EXPECT_EQ(bad_prob.code, 2);
  EXPECT_EQ(json::parse(bad_prob.err).at("error").at("kind"), "validation");

  std::ofstream(dir / "bad_config.json") << R"({"p_fn": 0.8})";
  const Result half_model = invoke({"build-grid", "--config", (dir / "bad_config.json").string(),
                                    "--annotations", (dir / "sim" / "annotations.json").string(),
                                    "--t-ref", "2.5", "--out", (dir / "y.evgr").string()});
  EXPECT_EQ(half_model.code, 2);

  const Result no_frame = invoke({"build-grid", "--config", (dir / "config.json").string(),
                                  "--annotations", (dir / "sim" / "annotations.json").string(),
                                  "--t-ref", "2.55", "--out", (dir / "w.evgr").string()});
  EXPECT_EQ(no_frame.code, 1);

  EXPECT_EQ(invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(invoke({"render-depth", "--grid", (dir / "targets_missing.evgr").string()}).code, 1);
  EXPECT_EQ(invoke({"render-depth", "--grid", (dir / "grid.counts.evgr").string(), "--scan",
                    ref_scan, "--out-csv", (dir / "x.csv").string()})
                .code,
            1);
}

}  // namespace
}  // namespace evoc::cli
