#include "mbdeform/deform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mbdeform {

GridCoordinates identity_coordinates(const MultiBlockDomain& domain) {
  return GridCoordinates{VectorField::sample(domain, [](const Vec3& p) { return p; }),
                         PhaseTime{Phase::Step1, 0.0}};
}

const char* to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "rk4";
}

int DeformConfig::step1_steps(double step1_end) const {
  if (!(dt_step1 > 0.0)) throw std::invalid_argument("deform.dt must be > 0");
  const double ratio = step1_end / dt_step1;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * steps) {
    throw std::invalid_argument("deform.dt must divide the step-1 interval into whole steps");
  }
  return static_cast<int>(steps);
}

void DeformConfig::validate(double step1_end) const {
  (void)step1_steps(step1_end);
  if (substeps_per_l < 1) throw std::invalid_argument("deform.substeps must be >= 1");
  if (!(max_move >= 0.0)) throw std::invalid_argument("deform.max_move must be >= 0");
}

NodeEscapeError::NodeEscapeError(int block_id, std::size_t local, const Vec3& position,
                                 const char* what)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg.precision(17);
        msg << "node " << local << " of block " << block_id << " " << what << " at ("
            << position.x << ", " << position.y << ", " << position.z
            << "); the time step is too large";
        return msg.str();
      }()),
      block_id_(block_id),
      local_(local) {}

FoldingError::FoldingError(const PhaseTime& stamp, FoldingReport report)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "grid folded at " << format_stamp(stamp) << ": " << report.folded.size()
            << " cell(s) with J <= 0";
        if (!report.folded.empty()) {
          const auto& c = report.folded.front();
          msg << ", first block " << c.block_id << " cell (" << c.cell.i << ", " << c.cell.j
              << ", " << c.cell.k << ") J = " << c.jacobian;
        }
        return msg.str();
      }()),
      report_(std::move(report)) {}

GridCoordinates advance(const MultiBlockDomain& domain, const GridCoordinates& phi,
                        const VelocityField& velocity, double dt, Integrator integrator,
                        double max_move) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(max_move >= 0.0)) throw std::invalid_argument("max_move must be >= 0");
  if (!phi.positions.matches(domain) || !velocity.eta.matches(domain)) {
    throw std::invalid_argument("grid and velocity do not match the domain");
  }
  const double reach = max_move * domain.spacing();
  std::vector<Vec3> x = phi.positions.to_global(domain);
  for (std::size_t g = 0; g < x.size(); ++g) {
    const NodeRef& owner = domain.owner(g);
    const int block_id = domain.block(owner.block).id();
    const DirectionSet& normals = domain.boundary_normals(g);
    const Vec3 ref = domain.lattice_position(domain.lattice_node(g));
    auto eta = [&](const Vec3& q) {
      try {
        return interpolate_velocity(domain, velocity, q);
      } catch (const OutOfDomainError&) {
        throw NodeEscapeError(block_id, owner.local, q);
      }
    };
    // Largest corner speed of the cell holding q; bounds how fast the
    // interpolated field can change across the cell.
    auto cell_speed = [&](const Vec3& q) {
      const Location at = locate(domain, q);
      const auto& b = domain.block(at.block);
      const auto& v = velocity.eta.block(at.block);
      double s = 0.0;
      for (int c = 0; c < 8; ++c) {
        const Index3 n{at.cell.i + (c & 1), at.cell.j + ((c >> 1) & 1), at.cell.k + ((c >> 2) & 1)};
        s = std::max(s, norm(v[b.node_index(n)]));
      }
      return s;
    };
    Vec3 p = x[g];
    double left = dt;
    while (left > 0.0) {
      const Vec3 k1 = eta(p);
      double tau = left;
      if (reach > 0.0) {
        const double speed = cell_speed(p);
        if (speed * tau > reach) tau = reach / speed;
      }
      if (left - tau <= 1e-12 * dt) tau = left;
      Vec3 next;
      if (integrator == Integrator::Euler) {
        next = p + tau * k1;
      } else {
        const Vec3 k2 = eta(p + (0.5 * tau) * k1);
        const Vec3 k3 = eta(p + (0.5 * tau) * k2);
        const Vec3 k4 = eta(p + tau * k3);
        next = p + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      for (int a = 0; a < 3; ++a) {
        if (normals.has_axis(a)) next[static_cast<std::size_t>(a)] = ref[static_cast<std::size_t>(a)];
      }
      try {
        (void)locate(domain, next);
      } catch (const OutOfDomainError&) {
        throw NodeEscapeError(block_id, owner.local, next);
      }
      p = next;
      left -= tau;
    }
    if (!normals.empty()) {
      const DirectionSet here = boundary_normals_at(domain, p);
      for (Direction d : normals.directions()) {
        if (!here.contains(d)) throw NodeEscapeError(block_id, owner.local, p, "left its boundary face");
      }
    }
    x[g] = p;
  }
  return GridCoordinates{VectorField::from_global(domain, x), phi.stamp};
}

namespace {

// One solve + advance, shared by both phases.
class Stepper {
 public:
  Stepper(const MultiBlockDomain& domain, const RunSettings& settings, RunStats* stats)
      : domain_(domain), settings_(settings), stats_(stats) {}

  Snapshot step(const GridCoordinates& phi, const MonitorField& f_now, const MonitorField& f_next,
                double dt) {
    const RhsField rhs = assemble_rhs(domain_, f_now, f_next, dt);
    PotentialField omega = sor_solve(rhs, domain_, settings_.solver, guess_ ? &*guess_ : nullptr);
    if (stats_ != nullptr) {
      ++stats_->solves;
      stats_->sweeps += omega.iterations_used;
      stats_->worst_derivative_mismatch = std::max(
          stats_->worst_derivative_mismatch, interface_derivative_mismatch(domain_, omega.omega));
    }
    const VectorField grad = gradient(domain_, omega.omega);
    const VelocityField velocity = node_velocity(domain_, f_now, grad);
    GridCoordinates next =
        advance(domain_, phi, velocity, dt, settings_.deform.integrator,
                settings_.deform.max_move);
    next.stamp = f_next.stamp;
    FoldingReport folds = folding_check(domain_, next);
    if (!folds.pass) throw FoldingError(next.stamp, std::move(folds));
    guess_ = omega.omega;
    return Snapshot{std::move(next), f_next, std::move(omega.omega)};
  }

 private:
  const MultiBlockDomain& domain_;
  const RunSettings& settings_;
  RunStats* stats_;
  std::optional<ScalarField> guess_;
};

}  // namespace

GridCoordinates run_step1(const MultiBlockDomain& domain, const RunSettings& settings,
                          const SnapshotSink& sink, RunStats* stats) {
  settings.monitor.validate();
  const double end = settings.monitor.step1_end;
  const int steps = settings.deform.step1_steps(end);
  settings.deform.validate(end);

  Stepper stepper(domain, settings, stats);
  GridCoordinates phi = identity_coordinates(domain);
  MonitorField f_now = monitor_at(domain, settings.monitor, PhaseTime{Phase::Step1, 0.0});
  if (sink) sink(Snapshot{phi, f_now, std::nullopt});
  for (int s = 0; s < steps; ++s) {
    const PhaseTime next{Phase::Step1, s + 1 == steps ? end : end * (s + 1) / steps};
    const double dt = next.value - f_now.stamp.value;
    MonitorField f_next = monitor_at(domain, settings.monitor, next);
    Snapshot snap = stepper.step(phi, f_now, f_next, dt);
    if (sink) sink(snap);
    phi = std::move(snap.coords);
    f_now = std::move(f_next);
  }
  return phi;
}

GridCoordinates run_step2(const MultiBlockDomain& domain, const RunSettings& settings,
                          const GridCoordinates& phi_start, const SnapshotSink& sink,
                          RunStats* stats) {
  settings.monitor.validate();
  settings.deform.validate(settings.monitor.step1_end);
  const auto& schedule = settings.monitor.schedule;
  const double l_begin = schedule.breakpoints().front().l;
  const int span = static_cast<int>(std::floor(schedule.final_l() - l_begin + 1e-9));
  const int sub = settings.deform.substeps_per_l;

  Stepper stepper(domain, settings, stats);
  GridCoordinates phi = phi_start;
  phi.stamp = PhaseTime{Phase::Step2, l_begin};
  MonitorField f_now = monitor_at(domain, settings.monitor, phi.stamp);
  if (sink) sink(Snapshot{phi, f_now, std::nullopt});
  for (int l = 0; l < span; ++l) {
    std::optional<ScalarField> omega;
    for (int m = 0; m < sub; ++m) {
      const double value = m + 1 == sub ? l_begin + l + 1 : l_begin + l + double(m + 1) / sub;
      MonitorField f_next = monitor_at(domain, settings.monitor, PhaseTime{Phase::Step2, value});
      Snapshot snap = stepper.step(phi, f_now, f_next, 1.0 / sub);
      phi = std::move(snap.coords);
      omega = std::move(snap.omega);
      f_now = std::move(f_next);
    }
    if (sink) sink(Snapshot{phi, f_now, std::move(omega)});
  }
  return phi;
}

GridCoordinates run_backstep(const MultiBlockDomain& domain, const RunSettings& settings,
                             const SnapshotSink& sink, RunStats* stats) {
  const double end = settings.monitor.step1_end;
  const GridCoordinates step1 = run_step1(
      domain, settings,
      [&](const Snapshot& s) {
        if (sink && s.coords.stamp.value < end) sink(s);
      },
      stats);
  return run_step2(domain, settings, step1, sink, stats);
}

}  // namespace mbdeform
