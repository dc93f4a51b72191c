#pragma once

// Node-position integration and the two-phase back-step driver.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "mbdeform/diagnostics.hpp"
#include "mbdeform/monitor.hpp"
#include "mbdeform/poisson.hpp"
#include "mbdeform/velocity.hpp"

namespace mbdeform {

enum class Integrator { Euler, Rk4 };

const char* to_string(Integrator integrator);

struct DeformConfig {
  double dt_step1 = 0.05;
  int substeps_per_l = 1;
  Integrator integrator = Integrator::Euler;
  /// Sub-step bound, in cells: a node moves in pieces short enough that the
  /// fastest corner of its cell would travel at most this far. 0 disables
  /// splitting.
  double max_move = 0.25;

  /// Number of step-1 steps; throws std::invalid_argument unless dt divides
  /// step1_end into a whole number of steps.
  int step1_steps(double step1_end) const;
  void validate(double step1_end) const;
};

/// A moved node could not be located in the domain.
class NodeEscapeError : public std::runtime_error {
 public:
  NodeEscapeError(int block_id, std::size_t local, const Vec3& position,
                  const char* what = "left the domain");
  int block_id() const { return block_id_; }
  std::size_t local_node() const { return local_; }

 private:
  int block_id_;
  std::size_t local_;
};

/// Some cell has J <= 0 after a step.
class FoldingError : public std::runtime_error {
 public:
  FoldingError(const PhaseTime& stamp, FoldingReport report);
  const FoldingReport& report() const { return report_; }

 private:
  FoldingReport report_;
};

/// Moves every node along the interpolated velocity for one step of size dt.
/// The velocity is frozen over the step (rk4 re-samples it in space only).
/// A node in a cell whose fastest corner would travel more than max_move
/// cells takes the step in shorter pieces. Boundary nodes are put back on
/// their reference planes and each shared node is computed once and copied
/// to every block. Throws NodeEscapeError if a node cannot be located or a
/// boundary node ends up off its face.
GridCoordinates advance(const MultiBlockDomain& domain, const GridCoordinates& phi,
                        const VelocityField& velocity, double dt,
                        Integrator integrator = Integrator::Euler, double max_move = 0.25);

struct Snapshot {
  GridCoordinates coords;
  MonitorField monitor;              ///< monitor at coords.stamp
  std::optional<ScalarField> omega;  ///< potential of the step that produced coords
};

using SnapshotSink = std::function<void(const Snapshot&)>;

struct RunSettings {
  MonitorSpec monitor;
  SolverConfig solver;
  DeformConfig deform;
};

/// Counters accumulated over a run.
struct RunStats {
  int solves = 0;
  long sweeps = 0;
  double worst_derivative_mismatch = 0.0;
};

/// Step 1: deforms the reference lattice over t in [0, step1_end] toward the
/// sphere at its first centre. Emits t = 0, dt, ..., step1_end.
GridCoordinates run_step1(const MultiBlockDomain& domain, const RunSettings& settings,
                          const SnapshotSink& sink, RunStats* stats = nullptr);

/// Step 2: follows the sphere along its schedule, one unit of l at a time.
/// Emits one snapshot per integer l, starting with phi_start itself.
GridCoordinates run_step2(const MultiBlockDomain& domain, const RunSettings& settings,
                          const GridCoordinates& phi_start, const SnapshotSink& sink,
                          RunStats* stats = nullptr);

/// Step 1 followed by step 2. The final step-1 grid is emitted once, as l = 0.
GridCoordinates run_backstep(const MultiBlockDomain& domain, const RunSettings& settings,
                             const SnapshotSink& sink, RunStats* stats = nullptr);

}  // namespace mbdeform
