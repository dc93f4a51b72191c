#pragma once

// Monitor functions built from the level set of a moving sphere.

#include <vector>

#include "mbdeform/fields.hpp"

namespace mbdeform {

/// Sphere radius and a piecewise-linear centre trajectory over artificial
/// time l. Outside the breakpoint range the end centres are held.
class SphereSchedule {
 public:
  struct Breakpoint {
    double l = 0.0;
    Vec3 center;
  };

  SphereSchedule(double radius, std::vector<Breakpoint> breakpoints);

  /// r = 0.2; centre (0.5,1.5,0.5) -> (0.5,0.5,0.5) over l in [0,20], then
  /// -> (1.5,0.5,0.5) over l in [20,40].
  static SphereSchedule backstep();

  double radius() const { return radius_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double final_l() const { return breakpoints_.back().l; }
  Vec3 center(double l) const;

 private:
  double radius_;
  std::vector<Breakpoint> breakpoints_;
};

/// Parameters of the piecewise-linear pre-monitor.
///
/// Inside the band |d| < band the target profile is floor_scale + slope*|d|
/// (left-closed branches as written: -band <= d < 0 and 0 <= d < band), and
/// 1 elsewhere. Step 1 blends from 1 to that profile linearly over
/// t in [0, step1_end].
struct MonitorSpec {
  SphereSchedule schedule = SphereSchedule::backstep();
  double band = 0.05;
  double slope = 8.0;
  double floor_scale = 0.2;
  double step1_end = 0.5;

  /// Throws std::invalid_argument when the profile could reach zero.
  void validate() const;
};

/// d = |p - center(l)|^2 - r^2.
double level_set(const SphereSchedule& schedule, const Vec3& p, double l);

/// Step-1 pre-monitor; throws std::invalid_argument for t outside
/// [0, spec.step1_end].
double pre_monitor_step1(const MonitorSpec& spec, double d, double t);

/// Step-2 pre-monitor: the step-1 profile frozen at t = step1_end.
double pre_monitor_step2(const MonitorSpec& spec, double d);

struct MonitorField {
  ScalarField values;
  PhaseTime stamp;
  double scale = 1.0;  ///< Q / |Omega| applied to the pre-monitor
};

/// Midpoint quadrature of 1/g over all cells, each cell taking the mean of
/// its 8 corner values.
double integrate_reciprocal(const MultiBlockDomain& domain, const ScalarField& g);

/// f = pre * Q / |Omega| with Q the quadrature of 1/pre. Throws
/// std::invalid_argument on any non-positive sample.
MonitorField normalize(const ScalarField& pre, const MultiBlockDomain& domain,
                       PhaseTime stamp = {});

/// Pre-monitor sampled at every node for the given phase-time.
ScalarField pre_monitor_field(const MultiBlockDomain& domain, const MonitorSpec& spec,
                              PhaseTime when);

/// Normalized monitor at every node of every block.
MonitorField monitor_at(const MultiBlockDomain& domain, const MonitorSpec& spec, PhaseTime when);

}  // namespace mbdeform
