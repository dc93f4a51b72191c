#include "mbdeform/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mbdeform/config.hpp"
#include "mbdeform/verify.hpp"
#include "mbdeform/vtk_io.hpp"

namespace mbdeform {

namespace fs = std::filesystem;

namespace {

int do_run(const fs::path& config_path) {
  const RunConfig config = load_config(config_path);
  const MultiBlockDomain domain = build_domain(config);
  fs::create_directories(config.output_dir);

  const fs::path report_path = config.output_dir / "report.csv";
  std::ofstream report(report_path);
  if (!report) throw IoError("cannot write " + report_path.string());
  write_report_header(report);

  int index = 0;
  int written = 0;
  RunStats stats;
  run_backstep(
      domain, config.settings,
      [&](const Snapshot& s) {
        write_report_row(report, grid_report(domain, s.coords, s.monitor));
        if (index % config.cadence == 0) {
          char name[32];
          std::snprintf(name, sizeof name, "snapshot_%03d", index);
          const fs::path stem = config.output_dir / name;
          export_vtk(domain, s.coords, stem, &s.monitor.values, s.omega ? &*s.omega : nullptr);
          export_slice(domain, s.coords, config.slice_z, stem.string() + "_slice");
          export_cutaway(domain, s.coords, config.slice_z, stem.string() + "_cutaway",
                         &s.monitor.values);
          ++written;
        }
        ++index;
      },
      &stats);
  report.flush();
  if (!report) throw IoError("write to " + report_path.string() + " failed");
  std::cout << "wrote " << written << " snapshot set(s) of " << index << " and "
            << report_path.string() << " (" << stats.solves << " solves, " << stats.sweeps
            << " SOR sweeps)\n";
  return 0;
}

int do_verify(const fs::path& config_path) {
  const RunConfig config = load_config(config_path);
  bool all = true;
  for (const auto& check : run_verification(config)) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
              << "\n";
    all = all && check.pass;
  }
  return all ? 0 : 1;
}

int do_export(const fs::path& dir, double z0, const fs::path& out_dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  fs::create_directories(out_dir);
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".vtk" && name.find("_slice") == std::string::npos &&
        name.find("_cutaway") == std::string::npos) {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  for (const auto& in : inputs) {
    const fs::path out = out_dir / (in.stem().string() + "_slice.vtk");
    write_vtk(out, slice_grid(read_vtk(in), z0));
  }
  std::cout << "wrote " << inputs.size() << " slice file(s) to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli(args);
}

int cli(const std::vector<std::string>& args) {
  CLI::App app{"Multi-block grid deformation"};
  app.name("mbdeform");
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run the configured scenario");
  run->add_option("config", run_config, "JSON config file")->required();

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Run the self-checks");
  verify->add_option("config", verify_config, "JSON config file")->required();

  std::string snapshot_dir;
  std::string out_dir;
  double z0 = 0.5;
  auto* exp = app.add_subcommand("export", "Write z-slices of exported snapshots");
  exp->add_option("snapshot-dir", snapshot_dir, "Directory of snapshot .vtk files")->required();
  exp->add_option("--z", z0, "Slice height")->check(CLI::Range(0.0, 1.0));
  exp->add_option("--out", out_dir, "Output directory (default: <snapshot-dir>/slices)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*run) return do_run(run_config);
    if (*verify) return do_verify(verify_config);
    if (*exp) {
      const fs::path out = out_dir.empty() ? fs::path(snapshot_dir) / "slices" : fs::path(out_dir);
      return do_export(snapshot_dir, z0, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mbdeform
