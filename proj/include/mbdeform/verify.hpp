#pragma once

// Self-checks run by `mbdeform verify`.

#include <string>
#include <vector>

#include "mbdeform/config.hpp"

namespace mbdeform {

struct ManufacturedError {
  double max_error = 0.0;
  double residual = 0.0;
};

/// Solves the Neumann problem on the unit cube with the exact solution
/// cos(pi x) cos(pi y) cos(pi z) and returns the nodal max error after
/// aligning means.
ManufacturedError manufactured_poisson_error(int n, const SolverConfig& config);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Manufactured Poisson convergence, identity-monitor no-op and a folding
/// scan of the configured run.
std::vector<CheckResult> run_verification(const RunConfig& config);

}  // namespace mbdeform
