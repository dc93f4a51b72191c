#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mbdeform/cli.hpp"
#include "mbdeform/config.hpp"
#include "mbdeform/vtk_io.hpp"

using namespace mbdeform;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("mbdeform_test_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MBDEFORM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::size_t count_files(const fs::path& dir, const std::string& needle) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().find(needle) != std::string::npos) ++n;
  }
  return n;
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.scenario, Scenario::Backstep);
  EXPECT_EQ(c.n, 20);
  EXPECT_DOUBLE_EQ(c.settings.monitor.schedule.radius(), 0.2);
  EXPECT_DOUBLE_EQ(c.settings.monitor.band, 0.05);
  EXPECT_DOUBLE_EQ(c.settings.monitor.slope, 8.0);
  EXPECT_DOUBLE_EQ(c.settings.monitor.floor_scale, 0.2);
  EXPECT_DOUBLE_EQ(c.settings.solver.relaxation(), 1.5);
  EXPECT_DOUBLE_EQ(c.settings.solver.tolerance(), 1e-8);
  EXPECT_EQ(c.settings.solver.max_iterations(), 20000);
  EXPECT_DOUBLE_EQ(c.settings.deform.dt_step1, 0.05);
  EXPECT_EQ(c.settings.deform.substeps_per_l, 1);
  EXPECT_EQ(c.settings.deform.integrator, Integrator::Euler);
  EXPECT_EQ(c.settings.monitor.schedule.center(20.0), (Vec3{0.5, 0.5, 0.5}));
  EXPECT_EQ(parse_config("{}").n, 20);
}

TEST(Config, RejectsBadValuesByName) {
  const std::string lambda = error_of(R"({"sor.lambda": 2.5})");
  EXPECT_NE(lambda.find("sor.lambda"), std::string::npos) << lambda;
  EXPECT_NE(lambda.find("(0, 2)"), std::string::npos) << lambda;
  EXPECT_NE(error_of(R"({"speed": 1})").find("unknown key 'speed'"), std::string::npos);
  EXPECT_NE(error_of(R"({"n": "twenty"})").find("'n'"), std::string::npos);
  EXPECT_NE(error_of(R"({"n": 1})").find("'n'"), std::string::npos);
  EXPECT_NE(error_of(R"({"deform.dt": 0.3})").find("deform.dt"), std::string::npos);
  EXPECT_NE(error_of(R"({"deform.integrator": "leapfrog"})").find("deform.integrator"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"monitor.radius": -0.1})").find("monitor.radius"), std::string::npos);
  EXPECT_NE(error_of(R"({"monitor.schedule": [[0, 1, 2]]})").find("monitor.schedule"),
            std::string::npos);
  const std::string parse = error_of("{\n  \"n\": 4,\n  oops\n}");
  EXPECT_NE(parse.find("line 3"), std::string::npos) << parse;
}

TEST(Config, ResolutionTen) {
  const RunConfig c = parse_config(R"({"n": 10})");
  const auto d = build_domain(c);
  EXPECT_EQ(d.block(d.block_position(1)).cells(), (Index3{10, 20, 10}));
  EXPECT_EQ(d.block(d.block_position(2)).cells(), (Index3{10, 10, 10}));
  EXPECT_DOUBLE_EQ(d.spacing(), 0.1);
}

TEST(Config, SingleBlockAndSchedule) {
  const RunConfig c = parse_config(
      R"({"scenario": "single_block", "n": 4, "monitor.schedule": [[0, 0.2, 0.2, 0.2], [2, 0.8, 0.2, 0.2]]})");
  EXPECT_EQ(build_domain(c).block_count(), 1u);
  EXPECT_EQ(c.settings.monitor.schedule.center(1.0), (Vec3{0.5, 0.2, 0.2}));
}

TEST(Vtk, RoundTripAtFullPrecision) {
  TempDir tmp;
  const auto d = build_backstep(3);
  GridCoordinates phi = identity_coordinates(d);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  for (std::size_t p = 0; p < d.block_count(); ++p) {
    for (auto& x : phi.positions.block(p)) x += Vec3{jitter(rng), jitter(rng), jitter(rng)} * (1.0 / 3.0);
  }
  const ScalarField monitor = ScalarField::sample(d, [](const Vec3& x) { return 1.0 / (1.0 + x.x); });
  const auto files = export_vtk(d, phi, tmp / "snap", &monitor);
  ASSERT_EQ(files.size(), 2u);
  for (std::size_t p = 0; p < d.block_count(); ++p) {
    const VtkGrid g = read_vtk(files[p]);
    ASSERT_EQ(g.points.size(), phi.positions.block(p).size());
    for (std::size_t n = 0; n < g.points.size(); ++n) EXPECT_EQ(g.points[n], phi.positions.at(p, n));
    ASSERT_EQ(g.scalars.count("monitor"), 1u);
    EXPECT_EQ(g.scalars.at("monitor"), monitor.block(p));
    EXPECT_EQ(g.scalars.count("omega"), 0u);
    const auto info = parse_block_info(g.title);
    EXPECT_EQ(info.block_id, d.block(p).id());
    EXPECT_DOUBLE_EQ(info.spacing, 1.0 / 3.0);
  }
}

TEST(Vtk, UnitBlockFileLayout) {
  TempDir tmp;
  const auto d = build_unit_block(2);
  const auto files = export_vtk(d, identity_coordinates(d), tmp / "unit");
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].filename(), "unit_b1.vtk");
  const std::string text = read_file(files[0]);
  EXPECT_NE(text.find("DATASET STRUCTURED_GRID"), std::string::npos);
  EXPECT_NE(text.find("DIMENSIONS 3 3 3"), std::string::npos);
  EXPECT_NE(text.find("POINTS 27 double"), std::string::npos);
  const VtkGrid g = read_vtk(files[0]);
  for (int k = 0; k <= 2; ++k) {
    for (int j = 0; j <= 2; ++j) {
      for (int i = 0; i <= 2; ++i) {
        EXPECT_EQ(g.points[g.point_index(i, j, k)], (Vec3{0.5 * i, 0.5 * j, 0.5 * k}));
      }
    }
  }
}

TEST(Vtk, InterfacePlanesAgreeAcrossFiles) {
  TempDir tmp;
  const auto d = build_backstep(20);
  GridCoordinates phi = identity_coordinates(d);
  // A conforming perturbation: every copy of a node moves the same way.
  for (std::size_t p = 0; p < d.block_count(); ++p) {
    for (auto& x : phi.positions.block(p)) {
      x += Vec3{0.01 * std::sin(7.0 * x.y) * x.z, 0.0, 0.0};
    }
  }
  const auto files = export_vtk(d, phi, tmp / "l0");
  const VtkGrid g1 = read_vtk(tmp / "l0_b1.vtk");
  const VtkGrid g2 = read_vtk(tmp / "l0_b2.vtk");
  for (int k = 0; k <= 20; ++k) {
    for (int j = 0; j <= 20; ++j) {
      EXPECT_EQ(g1.points[g1.point_index(20, j, k)], g2.points[g2.point_index(0, j, k)]);
    }
  }
}

TEST(Vtk, SliceAndCutawayPlanes) {
  TempDir tmp;
  const auto d = build_backstep(20);
  const auto phi = identity_coordinates(d);
  const VtkGrid full = block_grid(d, d.block_position(1), phi);
  const VtkGrid mid = slice_grid(full, 0.5);
  EXPECT_EQ(mid.dims, (Index3{21, 41, 1}));
  for (const auto& x : mid.points) EXPECT_DOUBLE_EQ(x.z, 0.5);  // k = 10
  EXPECT_LT(distance(mid.points[mid.point_index(3, 7, 0)], Vec3{0.15, 0.35, 0.5}), 1e-15);
  const VtkGrid floor = slice_grid(full, 0.0);
  for (const auto& x : floor.points) EXPECT_EQ(x.z, 0.0);
  EXPECT_EQ(slice_grid(full, 0.52).points.front().z, 0.5);
  const VtkGrid cut = cutaway_grid(full, 0.5);
  EXPECT_EQ(cut.dims, (Index3{21, 41, 11}));
  const auto files = export_slice(d, phi, 0.5, tmp / "s");
  ASSERT_EQ(files.size(), 2u);
  EXPECT_NE(read_file(files[1]).find("DIMENSIONS 21 21 1"), std::string::npos);
}

TEST(Vtk, ReadErrorsNameThePath) {
  TempDir tmp;
  try {
    read_vtk(tmp / "missing.vtk");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.vtk"), std::string::npos);
  }
  write_file(tmp / "bad.vtk", "# vtk DataFile Version 3.0\nnot a grid\n");
  EXPECT_THROW(read_vtk(tmp / "bad.vtk"), IoError);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("run"), 2);
  EXPECT_EQ(cli(std::vector<std::string>{"run", "--bogus", "x"}), 2);
  EXPECT_EQ(run_cli("run /nonexistent/config.json"), 1);
}

TEST(Cli, SolverFailureExitsNonzero) {
  TempDir tmp;
  write_file(tmp / "c.json", R"({"n": 4, "sor.max_iters": 1, "output.dir": ")" +
                                 (tmp / "out").string() + "\"}");
  EXPECT_NE(run_cli("run " + (tmp / "c.json").string()), 0);
}

TEST(Cli, RunWritesEverySnapshotAndExportReslices) {
  TempDir tmp;
  const fs::path out = tmp / "out";
  write_file(tmp / "c.json", R"({"n": 3, "monitor.radius": 0, "monitor.band": 0, "output.dir": ")" +
                                 out.string() + "\"}");
  ASSERT_EQ(run_cli("run " + (tmp / "c.json").string()), 0);
  EXPECT_TRUE(fs::exists(out / "report.csv"));
  EXPECT_TRUE(fs::exists(out / "snapshot_000_b1.vtk"));
  EXPECT_TRUE(fs::exists(out / "snapshot_050_b2.vtk"));
  EXPECT_FALSE(fs::exists(out / "snapshot_051_b1.vtk"));
  EXPECT_EQ(count_files(out, "_slice_b"), 102u);
  EXPECT_EQ(count_files(out, "_cutaway_b"), 102u);
  std::istringstream report(read_file(out / "report.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(report, line)) ++rows;
  EXPECT_EQ(rows, 51);

  ASSERT_EQ(run_cli("export " + out.string() + " --z 0"), 0);
  EXPECT_EQ(count_files(out / "slices", ".vtk"), 102u);
  const VtkGrid s = read_vtk(out / "slices" / "snapshot_010_b1_slice.vtk");
  EXPECT_EQ(s.dims, (Index3{4, 7, 1}));
  EXPECT_EQ(run_cli("export " + (tmp / "nowhere").string()), 1);
}

TEST(Cli, CadenceThinsSnapshots) {
  TempDir tmp;
  const fs::path out = tmp / "out";
  write_file(tmp / "c.json", R"({"n": 2, "monitor.radius": 0, "monitor.band": 0, "output.cadence": 10, "output.dir": ")" +
                                 out.string() + "\"}");
  ASSERT_EQ(run_cli("run " + (tmp / "c.json").string()), 0);
  // Indices 0, 10, ..., 50.
  EXPECT_EQ(count_files(out, "snapshot_") - count_files(out, "_slice") - count_files(out, "_cutaway"),
            12u);
}

TEST(Cli, RunsAreBitIdentical) {
  TempDir tmp;
  auto run_into = [&](const std::string& name) {
    const fs::path out = tmp / name;
    write_file(tmp / (name + ".json"),
               R"({"n": 4, "deform.dt": 0.1, "monitor.schedule": [[0, 0.5, 1.5, 0.5], [2, 0.5, 1.3, 0.5]], "output.dir": ")" +
                   out.string() + "\"}");
    EXPECT_EQ(run_cli("run " + (tmp / (name + ".json")).string()), 0);
    return out;
  };
  const fs::path a = run_into("a");
  const fs::path b = run_into("b");
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(read_file(e.path()), read_file(other)) << e.path().filename();
    ++compared;
  }
  EXPECT_EQ(compared, 1u + 3u * 2u * (5u + 3u));
}
