#include "mbdeform/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mbdeform {

SphereSchedule::SphereSchedule(double radius, std::vector<Breakpoint> breakpoints)
    : radius_(radius), breakpoints_(std::move(breakpoints)) {
  if (!(radius_ >= 0.0) || !std::isfinite(radius_)) {
    throw std::invalid_argument("sphere radius must be non-negative");
  }
  if (breakpoints_.empty()) throw std::invalid_argument("sphere schedule needs a breakpoint");
  for (std::size_t b = 1; b < breakpoints_.size(); ++b) {
    if (!(breakpoints_[b].l > breakpoints_[b - 1].l)) {
      throw std::invalid_argument("sphere schedule breakpoints must be strictly increasing in l");
    }
  }
}

SphereSchedule SphereSchedule::backstep() {
  return SphereSchedule(0.2, {{0.0, {0.5, 1.5, 0.5}},
                              {20.0, {0.5, 0.5, 0.5}},
                              {40.0, {1.5, 0.5, 0.5}}});
}

Vec3 SphereSchedule::center(double l) const {
  if (l <= breakpoints_.front().l) return breakpoints_.front().center;
  if (l >= breakpoints_.back().l) return breakpoints_.back().center;
  auto hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), l,
                             [](double v, const Breakpoint& b) { return v < b.l; });
  auto lo = hi - 1;
  const double s = (l - lo->l) / (hi->l - lo->l);
  return lo->center + s * (hi->center - lo->center);
}

void MonitorSpec::validate() const {
  if (!(band >= 0.0)) throw std::invalid_argument("monitor.band must be >= 0");
  if (!(slope >= 0.0)) throw std::invalid_argument("monitor.slope must be >= 0");
  if (!(floor_scale > 0.0)) throw std::invalid_argument("monitor.floor_scale must be > 0");
  if (!(step1_end > 0.0)) throw std::invalid_argument("step-1 end time must be > 0");
}

double level_set(const SphereSchedule& schedule, const Vec3& p, double l) {
  const Vec3 q = p - schedule.center(l);
  return dot(q, q) - schedule.radius() * schedule.radius();
}

namespace {

// Frozen target profile (value at the end of step 1).
double target_profile(const MonitorSpec& spec, double d) {
  if (d < -spec.band) return 1.0;
  if (d < 0.0) return spec.floor_scale - spec.slope * d;
  if (d < spec.band) return spec.floor_scale + spec.slope * d;
  return 1.0;
}

}  // namespace

double pre_monitor_step1(const MonitorSpec& spec, double d, double t) {
  if (!(t >= 0.0 && t <= spec.step1_end)) {
    throw std::invalid_argument("step-1 time " + std::to_string(t) + " outside [0, " +
                                std::to_string(spec.step1_end) + "]");
  }
  if (d < -spec.band || d >= spec.band) return 1.0;
  const double s = t / spec.step1_end;
  return 1.0 - s + s * target_profile(spec, d);
}

double pre_monitor_step2(const MonitorSpec& spec, double d) { return target_profile(spec, d); }

double integrate_reciprocal(const MultiBlockDomain& domain, const ScalarField& g) {
  const double h3 = domain.spacing() * domain.spacing() * domain.spacing();
  double total = 0.0;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& b = domain.block(p);
    const auto& v = g.block(p);
    for (std::size_t c = 0; c < b.cell_count(); ++c) {
      const Index3 cell = b.cell_at(c);
      double sum = 0.0;
      for (int corner = 0; corner < 8; ++corner) {
        const Index3 n{cell.i + (corner & 1), cell.j + ((corner >> 1) & 1),
                       cell.k + ((corner >> 2) & 1)};
        sum += 1.0 / v[b.node_index(n)];
      }
      total += sum / 8.0;
    }
  }
  return total * h3;
}

MonitorField normalize(const ScalarField& pre, const MultiBlockDomain& domain, PhaseTime stamp) {
  if (!pre.matches(domain)) throw std::invalid_argument("pre-monitor does not match the domain");
  for (std::size_t p = 0; p < pre.block_count(); ++p) {
    for (double v : pre.block(p)) {
      if (!(v > 0.0)) throw std::invalid_argument("pre-monitor must be positive everywhere");
    }
  }
  const double scale = integrate_reciprocal(domain, pre) / domain.volume();
  MonitorField out{pre, stamp, scale};
  for (std::size_t p = 0; p < out.values.block_count(); ++p) {
    for (double& v : out.values.block(p)) v *= scale;
  }
  return out;
}

ScalarField pre_monitor_field(const MultiBlockDomain& domain, const MonitorSpec& spec,
                              PhaseTime when) {
  spec.validate();
  if (when.phase == Phase::Step1) {
    const double t = when.value;
    // Validate once so an invalid t is reported even for an empty band.
    (void)pre_monitor_step1(spec, 0.0, t);
    const double l0 = spec.schedule.breakpoints().front().l;
    return ScalarField::sample(domain, [&](const Vec3& p) {
      return pre_monitor_step1(spec, level_set(spec.schedule, p, l0), t);
    });
  }
  const double l = when.value;
  return ScalarField::sample(domain, [&](const Vec3& p) {
    return pre_monitor_step2(spec, level_set(spec.schedule, p, l));
  });
}

MonitorField monitor_at(const MultiBlockDomain& domain, const MonitorSpec& spec, PhaseTime when) {
  return normalize(pre_monitor_field(domain, spec, when), domain, when);
}

}  // namespace mbdeform
