#include "mbdeform/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mbdeform {

LaplaceOperator::LaplaceOperator(const MultiBlockDomain& domain) : h_(domain.spacing()) {
  const std::size_t n = domain.unique_node_count();
  neighbor_.resize(n);
  coeff_.resize(n);
  weight_.resize(n);
  component_.resize(n);

  for (std::size_t g = 0; g < n; ++g) {
    const Index3& node = domain.lattice_node(g);
    component_[g] = domain.component_of(domain.owner(g).block);

    int octants = 0;
    for (int c = 0; c < 8; ++c) {
      const Index3 cell{node.i - 1 + (c & 1), node.j - 1 + ((c >> 1) & 1),
                        node.k - 1 + ((c >> 2) & 1)};
      if (domain.has_cell(cell)) ++octants;
    }
    weight_[g] = octants / 8.0;

    for (int d = 0; d < 6; ++d) {
      const auto dir = static_cast<Direction>(d);
      const auto a = static_cast<std::size_t>(axis_of(dir));
      const auto t1 = (a + 1) % 3;
      const auto t2 = (a + 2) % 3;
      int faces = 0;
      for (int d1 = -1; d1 <= 0; ++d1) {
        for (int d2 = -1; d2 <= 0; ++d2) {
          Index3 cell = node;
          cell[t1] += d1;
          cell[t2] += d2;
          cell[a] += sign_of(dir) > 0 ? 0 : -1;
          if (domain.has_cell(cell)) ++faces;
        }
      }
      auto& nb = neighbor_[g][static_cast<std::size_t>(d)];
      auto& cf = coeff_[g][static_cast<std::size_t>(d)];
      if (faces == 0) {
        nb = -1;
        cf = 0.0;
      } else {
        Index3 other = node;
        other[a] += sign_of(dir);
        nb = domain.find_node(other);
        cf = (faces / 4.0) / weight_[g];
      }
    }
  }

  order_.reserve(n);
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    for (std::size_t local = 0; local < domain.block(p).node_count(); ++local) {
      const std::size_t g = domain.global_node(p, local);
      if (domain.owner(g).block == p) order_.push_back(g);
    }
  }
}

double LaplaceOperator::apply(const std::vector<double>& w, std::size_t g) const {
  const auto& nb = neighbor_[g];
  const auto& cf = coeff_[g];
  double sum = 0.0;
  for (std::size_t d = 0; d < 6; ++d) {
    if (nb[d] >= 0) sum += cf[d] * w[static_cast<std::size_t>(nb[d])];
  }
  return (sum - 6.0 * w[g]) / (h_ * h_);
}

SolverConfig::SolverConfig(double relaxation, double tolerance, int max_iterations,
                           int check_interval)
    : relaxation_(relaxation),
      tolerance_(tolerance),
      max_iterations_(max_iterations),
      check_interval_(check_interval) {
  if (!(relaxation > 0.0 && relaxation < 2.0)) {
    throw std::invalid_argument("sor.lambda must lie in (0, 2)");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("sor.tol must be > 0");
  if (max_iterations < 1) throw std::invalid_argument("sor.max_iters must be >= 1");
  if (check_interval < 1) throw std::invalid_argument("residual check interval must be >= 1");
}

void remove_mean(const MultiBlockDomain& domain, const LaplaceOperator& op, RhsField& rhs) {
  std::vector<double> values = rhs.values.to_global(domain);
  std::vector<double> num(domain.component_count(), 0.0);
  std::vector<double> den(domain.component_count(), 0.0);
  for (std::size_t g = 0; g < values.size(); ++g) {
    num[op.component(g)] += op.weight(g) * values[g];
    den[op.component(g)] += op.weight(g);
  }
  double largest = 0.0;
  for (std::size_t c = 0; c < num.size(); ++c) {
    num[c] /= den[c];
    largest = std::max(largest, std::abs(num[c]));
  }
  for (std::size_t g = 0; g < values.size(); ++g) values[g] -= num[op.component(g)];
  rhs.values = ScalarField::from_global(domain, values);
  rhs.mean_removed = true;
  rhs.removed_mean = largest;
}

RhsField assemble_rhs(const MultiBlockDomain& domain, const MonitorField& f_now,
                      const MonitorField& f_next, double dt) {
  if (!f_now.values.matches(domain) || !f_next.values.matches(domain)) {
    throw std::invalid_argument("monitor fields do not match the domain");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  RhsField rhs{ScalarField(domain, 0.0)};
  for (std::size_t p = 0; p < domain.block_count(); ++p) {
    const auto& a = f_now.values.block(p);
    const auto& b = f_next.values.block(p);
    auto& r = rhs.values.block(p);
    for (std::size_t n = 0; n < r.size(); ++n) r[n] = -(1.0 / b[n] - 1.0 / a[n]) / dt;
  }
  remove_mean(domain, LaplaceOperator(domain), rhs);
  return rhs;
}

double residual(const LaplaceOperator& op, const std::vector<double>& omega,
                const std::vector<double>& rhs) {
  double worst = 0.0;
  for (std::size_t g = 0; g < op.size(); ++g) {
    worst = std::max(worst, std::abs(op.apply(omega, g) - rhs[g]));
  }
  return worst;
}

double residual(const MultiBlockDomain& domain, const ScalarField& omega, const ScalarField& rhs) {
  if (!omega.matches(domain) || !rhs.matches(domain)) {
    throw std::invalid_argument("fields do not match the domain");
  }
  return residual(LaplaceOperator(domain), omega.to_global(domain), rhs.to_global(domain));
}

PotentialField sor_solve(const RhsField& rhs, const MultiBlockDomain& domain,
                         const SolverConfig& config, const ScalarField* initial,
                         const ResidualObserver& observer) {
  if (!rhs.values.matches(domain)) throw std::invalid_argument("rhs does not match the domain");
  const LaplaceOperator op(domain);
  const std::vector<double> b = rhs.values.to_global(domain);
  std::vector<double> w = initial != nullptr ? initial->to_global(domain)
                                             : std::vector<double>(op.size(), 0.0);
  const double h2 = op.spacing() * op.spacing();
  const double lambda = config.relaxation();

  double res = residual(op, w, b);
  int sweeps = 0;
  if (observer) observer(0, res);
  while (res > config.tolerance() && sweeps < config.max_iterations()) {
    for (std::size_t g : op.sweep_order()) {
      double sum = 0.0;
      for (int d = 0; d < 6; ++d) {
        const long nb = op.neighbor(g, d);
        if (nb >= 0) sum += op.coefficient(g, d) * w[static_cast<std::size_t>(nb)];
      }
      const double gs = (sum - h2 * b[g]) / 6.0;
      w[g] = (1.0 - lambda) * w[g] + lambda * gs;
    }
    ++sweeps;
    if (sweeps % config.check_interval() == 0 || sweeps == config.max_iterations()) {
      res = residual(op, w, b);
      if (observer) observer(sweeps, res);
    }
  }
  if (res > config.tolerance()) {
    std::ostringstream msg;
    msg << "SOR did not converge: residual " << res << " > tolerance " << config.tolerance()
        << " after " << sweeps << " sweeps";
    throw SolverError(msg.str(), res, sweeps);
  }

  // Gauge: zero node-mean over each component.
  std::vector<double> sum(domain.component_count(), 0.0);
  std::vector<double> count(domain.component_count(), 0.0);
  for (std::size_t g = 0; g < w.size(); ++g) {
    sum[op.component(g)] += w[g];
    count[op.component(g)] += 1.0;
  }
  for (std::size_t g = 0; g < w.size(); ++g) w[g] -= sum[op.component(g)] / count[op.component(g)];

  return PotentialField{ScalarField::from_global(domain, w), res, sweeps};
}

}  // namespace mbdeform
