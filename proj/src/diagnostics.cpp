#include "mbdeform/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mbdeform/velocity.hpp"

namespace mbdeform {

namespace {

double det3(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  return c0.x * (c1.y * c2.z - c1.z * c2.y) - c1.x * (c0.y * c2.z - c0.z * c2.y) +
         c2.x * (c0.y * c1.z - c0.z * c1.y);
}

// Corner positions of one cell, corner bit 0 -> +i, bit 1 -> +j, bit 2 -> +k.
std::array<Vec3, 8> corners(const StructuredBlock& b, const std::vector<Vec3>& x,
                            const Index3& cell) {
  std::array<Vec3, 8> out;
  for (int c = 0; c < 8; ++c) {
    out[static_cast<std::size_t>(c)] =
        x[b.node_index(Index3{cell.i + (c & 1), cell.j + ((c >> 1) & 1), cell.k + ((c >> 2) & 1)})];
  }
  return out;
}

// d(x)/d(reference) of the trilinear map at local point (u, v, w), in units
// of the unit cell.
std::array<Vec3, 3> local_derivatives(const std::array<Vec3, 8>& x, double u, double v, double w) {
  std::array<Vec3, 3> d{};
  const double lu[2] = {1.0 - u, u};
  const double lv[2] = {1.0 - v, v};
  const double lw[2] = {1.0 - w, w};
  for (int c = 0; c < 8; ++c) {
    const int a = c & 1;
    const int b = (c >> 1) & 1;
    const int e = (c >> 2) & 1;
    const double su = a != 0 ? 1.0 : -1.0;
    const double sv = b != 0 ? 1.0 : -1.0;
    const double sw = e != 0 ? 1.0 : -1.0;
    const Vec3& p = x[static_cast<std::size_t>(c)];
    d[0] += p * (su * lv[b] * lw[e]);
    d[1] += p * (sv * lu[a] * lw[e]);
    d[2] += p * (sw * lu[a] * lv[b]);
  }
  return d;
}

}  // namespace

CellField jacobian_per_cell(const MultiBlockDomain& domain, const GridCoordinates& phi) {
  const double h = domain.spacing();
  CellField out(domain.block_count());
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& b = domain.block(p);
    const auto& x = phi.positions.block(p);
    out[p].resize(b.cell_count());
    for (std::size_t c = 0; c < b.cell_count(); ++c) {
      // The cell-centre derivative of the trilinear map is the mean of the
      // four edge differences along each axis.
      const auto d = local_derivatives(corners(b, x, b.cell_at(c)), 0.5, 0.5, 0.5);
      out[p][c] = det3(d[0], d[1], d[2]) / (h * h * h);
    }
  }
  return out;
}

CellField cell_volumes(const MultiBlockDomain& domain, const GridCoordinates& phi) {
  const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
  const double g1 = 0.5 + 0.5 / std::sqrt(3.0);
  const double gauss[2] = {g0, g1};
  CellField out(domain.block_count());
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& b = domain.block(p);
    const auto& x = phi.positions.block(p);
    out[p].resize(b.cell_count());
    for (std::size_t c = 0; c < b.cell_count(); ++c) {
      const auto cx = corners(b, x, b.cell_at(c));
      double vol = 0.0;
      for (double u : gauss) {
        for (double v : gauss) {
          for (double w : gauss) {
            const auto d = local_derivatives(cx, u, v, w);
            vol += det3(d[0], d[1], d[2]);
          }
        }
      }
      out[p][c] = vol / 8.0;
    }
  }
  return out;
}

std::vector<std::vector<Vec3>> cell_centers(const MultiBlockDomain& domain,
                                            const GridCoordinates& phi) {
  std::vector<std::vector<Vec3>> out(domain.block_count());
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& b = domain.block(p);
    const auto& x = phi.positions.block(p);
    out[p].resize(b.cell_count());
    for (std::size_t c = 0; c < b.cell_count(); ++c) {
      Vec3 sum;
      for (const Vec3& q : corners(b, x, b.cell_at(c))) sum += q;
      out[p][c] = sum * 0.125;
    }
  }
  return out;
}

HRatioStats h_ratio_stats(const MultiBlockDomain& domain, const GridCoordinates& phi,
                          const MonitorField& f) {
  const CellField jac = jacobian_per_cell(domain, phi);
  const auto centers = cell_centers(domain, phi);
  std::vector<double> ratios;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    for (std::size_t c = 0; c < jac[p].size(); ++c) {
      const double fc = interpolate(domain, f.values, locate(domain, centers[p][c]));
      ratios.push_back(jac[p][c] / fc);
    }
  }
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size());
  return HRatioStats{mean, std::sqrt(var) / mean};
}

double interface_mismatch(const MultiBlockDomain& domain, const GridCoordinates& phi) {
  double worst = 0.0;
  for (std::size_t g = 0; g < domain.unique_node_count(); ++g) {
    if (domain.copy_count(g) < 2) continue;
    const auto copies = domain.copies(g);
    const Vec3& first = phi.positions.at(copies.front());
    for (std::size_t c = 1; c < copies.size(); ++c) {
      worst = std::max(worst, distance(first, phi.positions.at(copies[c])));
    }
  }
  return worst;
}

double interface_derivative_mismatch(const MultiBlockDomain& domain, const ScalarField& omega) {
  const double h = domain.spacing();
  double worst = 0.0;
  for (const auto& patch : domain.interfaces()) {
    const std::size_t pa = domain.block_position(patch.side_a().block_id);
    const std::size_t pb = domain.block_position(patch.side_b().block_id);
    const auto& ba = domain.block(pa);
    const auto& bb = domain.block(pb);
    const auto a = static_cast<std::size_t>(patch.axis());
    const int s = sign_of(patch.side_a().face);
    const auto t1 = (a + 1) % 3;
    const auto t2 = (a + 2) % 3;
    const Index3 lo = patch.side_a().lo;
    const Index3 hi = patch.side_a().hi;
    for (int u = lo[t1] + 1; u < hi[t1]; ++u) {
      for (int v = lo[t2] + 1; v < hi[t2]; ++v) {
        Index3 na = lo;
        na[t1] = u;
        na[t2] = v;
        const Index3 nb = patch.to_b(na);
        Index3 inside_a = na;
        inside_a[a] -= s;
        Index3 inside_b = nb;
        inside_b[a] += s;
        const double wa_in = omega.at(pa, ba.node_index(inside_a));
        const double wb_in = omega.at(pb, bb.node_index(inside_b));
        const double wa = omega.at(pa, ba.node_index(na));
        const double wb = omega.at(pb, bb.node_index(nb));
        // One-sided quotients on each side of the interface, taken once with
        // block a's copy of the interface value and once with block b's.
        // Their mean is the central difference.
        const double below = std::abs((wa - wa_in) / h - (wb - wa_in) / h);
        const double above = std::abs((wb_in - wa) / h - (wb_in - wb) / h);
        worst = std::max({worst, below, above});
      }
    }
  }
  return worst;
}

FoldingReport folding_check(const MultiBlockDomain& domain, const GridCoordinates& phi) {
  const CellField jac = jacobian_per_cell(domain, phi);
  FoldingReport report;
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    for (std::size_t c = 0; c < jac[p].size(); ++c) {
      if (!(jac[p][c] > 0.0)) {
        report.pass = false;
        report.folded.push_back(
            FoldedCell{domain.block(p).id(), domain.block(p).cell_at(c), jac[p][c]});
      }
    }
  }
  return report;
}

GridReport grid_report(const MultiBlockDomain& domain, const GridCoordinates& phi,
                       const std::optional<MonitorField>& f) {
  GridReport r;
  r.stamp = phi.stamp;
  const CellField jac = jacobian_per_cell(domain, phi);
  const CellField vol = cell_volumes(domain, phi);
  r.min_jacobian = r.min_volume = std::numeric_limits<double>::infinity();
  r.max_jacobian = r.max_volume = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    for (std::size_t c = 0; c < jac[p].size(); ++c) {
      r.min_jacobian = std::min(r.min_jacobian, jac[p][c]);
      r.max_jacobian = std::max(r.max_jacobian, jac[p][c]);
      r.min_volume = std::min(r.min_volume, vol[p][c]);
      r.max_volume = std::max(r.max_volume, vol[p][c]);
      r.total_volume += vol[p][c];
    }
  }
  if (f) {
    const auto stats = h_ratio_stats(domain, phi, *f);
    r.h_mean = stats.mean;
    r.h_rsd = stats.relative_stddev;
  } else {
    r.h_mean = r.h_rsd = std::numeric_limits<double>::quiet_NaN();
  }
  r.interface_mismatch = interface_mismatch(domain, phi);
  return r;
}

std::string format_stamp(const PhaseTime& stamp) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.6g", stamp.phase == Phase::Step1 ? "t" : "l", stamp.value);
  return buf;
}

void write_report_header(std::ostream& out) {
  out << "stamp,minJ,maxJ,minVol,maxVol,Hmean,Hrsd,ifaceMismatch,totalVol\n";
}

void write_report_row(std::ostream& out, const GridReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                format_stamp(r.stamp).c_str(), r.min_jacobian, r.max_jacobian, r.min_volume,
                r.max_volume, r.h_mean, r.h_rsd, r.interface_mismatch, r.total_volume);
  out << buf;
}

}  // namespace mbdeform
