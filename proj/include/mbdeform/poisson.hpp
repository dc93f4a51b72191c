#pragma once

// Neumann Poisson problem on the multi-block lattice, solved by SOR.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbdeform/fields.hpp"
#include "mbdeform/monitor.hpp"

namespace mbdeform {

/// 7-point Laplacian over the unique nodes of a domain.
///
/// Coefficients come from the dual cell of each node: a link to a neighbour
/// is weighted by the fraction of its dual face inside the domain, and the
/// row is divided by the node's dual volume fraction. On flat faces, edges
/// and corners this reproduces the mirror-ghost Neumann stencils (weights 2
/// on inward links); across an interface a node sees its neighbours from
/// both blocks with interior weights.
class LaplaceOperator {
 public:
  explicit LaplaceOperator(const MultiBlockDomain& domain);

  std::size_t size() const { return weight_.size(); }
  double spacing() const { return h_; }

  /// Neighbour of node g in direction d (see Direction), or -1.
  long neighbor(std::size_t g, int d) const { return neighbor_[g][static_cast<std::size_t>(d)]; }
  /// Dimensionless coefficient of that link; the six sum to 6.
  double coefficient(std::size_t g, int d) const { return coeff_[g][static_cast<std::size_t>(d)]; }
  /// Dual volume of node g as a fraction of h^3.
  double weight(std::size_t g) const { return weight_[g]; }
  std::size_t component(std::size_t g) const { return component_[g]; }

  /// Per-block lexicographic sweep (k outer, i inner), blocks in order, each
  /// global node visited once.
  const std::vector<std::size_t>& sweep_order() const { return order_; }

  /// (sum_d c_d w_d - 6 w_g) / h^2 at node g.
  double apply(const std::vector<double>& w, std::size_t g) const;

 private:
  double h_;
  std::vector<std::array<long, 6>> neighbor_;
  std::vector<std::array<double, 6>> coeff_;
  std::vector<double> weight_;
  std::vector<std::size_t> component_;
  std::vector<std::size_t> order_;
};

struct RhsField {
  ScalarField values;
  bool mean_removed = false;
  double removed_mean = 0.0;  ///< largest per-component mean that was subtracted
};

/// SOR parameters. Construction validates.
class SolverConfig {
 public:
  SolverConfig() = default;
  SolverConfig(double relaxation, double tolerance, int max_iterations, int check_interval = 10);

  double relaxation() const { return relaxation_; }
  double tolerance() const { return tolerance_; }
  int max_iterations() const { return max_iterations_; }
  /// Sweeps between residual evaluations.
  int check_interval() const { return check_interval_; }

 private:
  double relaxation_ = 1.5;
  double tolerance_ = 1e-8;
  int max_iterations_ = 20000;
  int check_interval_ = 10;
};

struct PotentialField {
  ScalarField omega;
  double achieved_residual = 0.0;
  int iterations_used = 0;
};

/// Solver did not reach the tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Subtracts the dual-volume weighted mean per connected component.
void remove_mean(const MultiBlockDomain& domain, const LaplaceOperator& op, RhsField& rhs);

/// rhs = -(1/f_next - 1/f_now)/dt, mean-removed.
RhsField assemble_rhs(const MultiBlockDomain& domain, const MonitorField& f_now,
                      const MonitorField& f_next, double dt);

/// Observer for the residual after each check.
using ResidualObserver = std::function<void(int iteration, double residual)>;

/// Solves the discrete Neumann problem for omega with zero node-mean.
/// `initial` seeds the iterate when given. Throws SolverError when the
/// tolerance is not met within max_iterations.
PotentialField sor_solve(const RhsField& rhs, const MultiBlockDomain& domain,
                         const SolverConfig& config, const ScalarField* initial = nullptr,
                         const ResidualObserver& observer = {});

/// max over unique nodes of |L omega - rhs|, same stencils as the solver.
double residual(const MultiBlockDomain& domain, const ScalarField& omega, const ScalarField& rhs);
double residual(const LaplaceOperator& op, const std::vector<double>& omega,
                const std::vector<double>& rhs);

}  // namespace mbdeform
