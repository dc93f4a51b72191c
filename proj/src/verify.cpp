#include "mbdeform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace mbdeform {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

}  // namespace

ManufacturedError manufactured_poisson_error(int n, const SolverConfig& config) {
  const MultiBlockDomain domain = build_unit_block(n);
  const double pi = std::numbers::pi;
  auto exact = [pi](const Vec3& p) {
    return std::cos(pi * p.x) * std::cos(pi * p.y) * std::cos(pi * p.z);
  };
  RhsField rhs{ScalarField::sample(domain, [&](const Vec3& p) { return -3.0 * pi * pi * exact(p); })};
  remove_mean(domain, LaplaceOperator(domain), rhs);
  const PotentialField sol = sor_solve(rhs, domain, config);

  const auto& b = domain.block(0);
  double mean = 0.0;
  for (std::size_t i = 0; i < b.node_count(); ++i) mean += exact(b.reference_position(b.node_at(i)));
  mean /= static_cast<double>(b.node_count());
  ManufacturedError out;
  for (std::size_t i = 0; i < b.node_count(); ++i) {
    const double e = exact(b.reference_position(b.node_at(i))) - mean;
    out.max_error = std::max(out.max_error, std::abs(sol.omega.at(0, i) - e));
  }
  out.residual = sol.achieved_residual;
  return out;
}

std::vector<CheckResult> run_verification(const RunConfig& config) {
  std::vector<CheckResult> checks;

  {
    CheckResult c{"manufactured Poisson solution (n=10 vs n=20)", false, {}};
    try {
      const auto coarse = manufactured_poisson_error(10, config.settings.solver);
      const auto fine = manufactured_poisson_error(20, config.settings.solver);
      const double ratio = coarse.max_error / fine.max_error;
      c.pass = ratio >= 3.0 && ratio <= 5.0 && coarse.residual <= config.settings.solver.tolerance() &&
               fine.residual <= config.settings.solver.tolerance();
      c.detail = fmt("errors %.3e / %.3e, ratio %.3f", coarse.max_error, fine.max_error, ratio);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    checks.push_back(c);
  }

  const MultiBlockDomain domain = build_domain(config);
  {
    CheckResult c{"identity monitor leaves the grid unchanged", false, {}};
    try {
      RunSettings flat = config.settings;
      flat.monitor.schedule = SphereSchedule(0.0, flat.monitor.schedule.breakpoints());
      flat.monitor.band = 0.0;
      const GridCoordinates reference = identity_coordinates(domain);
      double worst = 0.0;
      int snapshots = 0;
      run_backstep(domain, flat, [&](const Snapshot& s) {
        ++snapshots;
        for (std::size_t p = 0; p < domain.block_count(); ++p) {
          for (std::size_t n = 0; n < reference.positions.block(p).size(); ++n) {
            worst = std::max(worst, distance(s.coords.positions.at(p, n),
                                             reference.positions.at(p, n)));
          }
        }
      });
      c.pass = worst < 1e-10;
      c.detail = fmt("max displacement %.3e over %.0f snapshots", worst, snapshots);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    checks.push_back(c);
  }

  {
    CheckResult c{"configured run is fold-free and conforming", false, {}};
    try {
      double min_j = INFINITY;
      double mismatch = 0.0;
      int snapshots = 0;
      RunStats stats;
      run_backstep(
          domain, config.settings,
          [&](const Snapshot& s) {
            ++snapshots;
            for (const auto& block : jacobian_per_cell(domain, s.coords)) {
              for (double j : block) min_j = std::min(min_j, j);
            }
            mismatch = std::max(mismatch, interface_mismatch(domain, s.coords));
          },
          &stats);
      c.pass = min_j > 0.0 && mismatch == 0.0 && stats.worst_derivative_mismatch == 0.0;
      c.detail = fmt("min J %.4g, interface mismatch %.3g over %.0f snapshots", min_j, mismatch,
                     snapshots);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    checks.push_back(c);
  }
  return checks;
}

}  // namespace mbdeform
