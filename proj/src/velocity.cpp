#include "mbdeform/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mbdeform {

VectorField gradient(const MultiBlockDomain& domain, const ScalarField& omega) {
  if (!omega.matches(domain)) throw std::invalid_argument("omega does not match the domain");
  const std::vector<double> w = omega.to_global(domain);
  const double inv2h = 1.0 / (2.0 * domain.spacing());
  std::vector<Vec3> grad(w.size());
  for (std::size_t g = 0; g < w.size(); ++g) {
    const Index3& n = domain.lattice_node(g);
    for (std::size_t a = 0; a < 3; ++a) {
      Index3 lo = n;
      Index3 hi = n;
      --lo[a];
      ++hi[a];
      const long gl = domain.find_node(lo);
      const long gh = domain.find_node(hi);
      grad[g][a] = (gl >= 0 && gh >= 0)
                       ? (w[static_cast<std::size_t>(gh)] - w[static_cast<std::size_t>(gl)]) * inv2h
                       : 0.0;
    }
  }
  return VectorField::from_global(domain, grad);
}

void project_to_boundary(const MultiBlockDomain& domain, VectorField& field) {
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    auto& v = field.block(p);
    for (std::size_t n = 0; n < v.size(); ++n) {
      const DirectionSet& normals = domain.boundary_normals(domain.global_node(p, n));
      if (normals.empty()) continue;
      for (int a = 0; a < 3; ++a) {
        if (normals.has_axis(a)) v[n][static_cast<std::size_t>(a)] = 0.0;
      }
    }
  }
}

VelocityField node_velocity(const MultiBlockDomain& domain, const MonitorField& f,
                            const VectorField& grad) {
  if (!f.values.matches(domain) || !grad.matches(domain)) {
    throw std::invalid_argument("monitor and gradient do not match the domain");
  }
  VelocityField out{grad, grad};
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    auto& eta = out.eta.block(p);
    const auto& fv = f.values.block(p);
    for (std::size_t n = 0; n < eta.size(); ++n) eta[n] *= fv[n];
  }
  project_to_boundary(domain, out.eta);
  return out;
}

OutOfDomainError::OutOfDomainError(const Vec3& p)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg.precision(17);
        msg << "point (" << p.x << ", " << p.y << ", " << p.z << ") is outside the domain";
        return msg.str();
      }()),
      point_(p) {}

namespace {

// Distance from p to the closed box of the block (0 inside).
double box_distance(const StructuredBlock& b, const Vec3& p) {
  const Vec3 lo = b.origin();
  const Vec3 hi = b.upper_corner();
  double d2 = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    const double d = std::max({lo[a] - p[a], 0.0, p[a] - hi[a]});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

Location locate_unchecked(const MultiBlockDomain& domain, std::size_t block, const Vec3& p) {
  const auto& b = domain.block(block);
  const Vec3 lo = b.origin();
  const double h = b.spacing();
  Location at{block, {}, {}};
  for (std::size_t a = 0; a < 3; ++a) {
    double u = (p[a] - lo[a]) / h;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) <= kLocateTolerance / h) u = nearest;
    u = std::clamp(u, 0.0, static_cast<double>(b.cells()[a]));
    const int cell = std::min(static_cast<int>(std::floor(u)), b.cells()[a] - 1);
    at.cell[a] = cell;
    at.local[a] = u - cell;
  }
  return at;
}

}  // namespace

Location locate_in_block(const MultiBlockDomain& domain, std::size_t block, const Vec3& p) {
  if (box_distance(domain.block(block), p) > kLocateTolerance) throw OutOfDomainError(p);
  return locate_unchecked(domain, block, p);
}

Location locate(const MultiBlockDomain& domain, const Vec3& p) {
  std::size_t best = domain.block_count();
  double best_distance = kLocateTolerance;
  for (std::size_t b = 0; b < domain.block_count(); ++b) {
    const double d = box_distance(domain.block(b), p);
    if (d == 0.0) return locate_unchecked(domain, b, p);
    if (d <= best_distance) {
      best = b;
      best_distance = d;
    }
  }
  if (best == domain.block_count()) throw OutOfDomainError(p);
  return locate_unchecked(domain, best, p);
}

DirectionSet boundary_normals_at(const MultiBlockDomain& domain, const Vec3& p) {
  const double h = domain.spacing();
  // Candidate lattice cells touching p along each axis.
  int lo[3];
  int hi[3];
  bool on_plane[3];
  for (std::size_t a = 0; a < 3; ++a) {
    const double u = p[a] / h;
    const double nearest = std::round(u);
    on_plane[a] = std::abs(u - nearest) <= kLocateTolerance / h;
    if (on_plane[a]) {
      lo[a] = static_cast<int>(nearest) - 1;
      hi[a] = static_cast<int>(nearest);
    } else {
      lo[a] = hi[a] = static_cast<int>(std::floor(u));
    }
  }
  DirectionSet normals;
  for (int a = 0; a < 3; ++a) {
    if (!on_plane[a]) continue;
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    for (int jb = lo[b]; jb <= hi[b]; ++jb) {
      for (int jc = lo[c]; jc <= hi[c]; ++jc) {
        Index3 below;
        below[static_cast<std::size_t>(a)] = lo[a];
        below[static_cast<std::size_t>(b)] = jb;
        below[static_cast<std::size_t>(c)] = jc;
        Index3 above = below;
        above[static_cast<std::size_t>(a)] = hi[a];
        const bool has_below = domain.has_cell(below);
        const bool has_above = domain.has_cell(above);
        if (has_below && !has_above) normals.insert(make_direction(a, 1));
        if (has_above && !has_below) normals.insert(make_direction(a, -1));
      }
    }
  }
  return normals;
}

Vec3 interpolate_velocity(const MultiBlockDomain& domain, const VelocityField& field,
                          const Location& at, const Vec3& p) {
  Vec3 out = interpolate(domain, field.eta, at);
  const DirectionSet normals = boundary_normals_at(domain, p);
  for (int a = 0; a < 3; ++a) {
    if (normals.has_axis(a)) out[static_cast<std::size_t>(a)] = 0.0;
  }
  return out;
}

Vec3 interpolate_velocity(const MultiBlockDomain& domain, const VelocityField& field,
                          const Vec3& p) {
  return interpolate_velocity(domain, field, locate(domain, p), p);
}

}  // namespace mbdeform
