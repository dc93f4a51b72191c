#pragma once

// Measurements on deformed grids: Jacobians, cell volumes, J/f statistics,
// interface conformity and folding.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mbdeform/fields.hpp"
#include "mbdeform/monitor.hpp"

namespace mbdeform {

/// Jacobian determinant at each cell centre: each column of grad(phi) is the
/// mean of the cell's four edge differences along that axis, divided by h.
CellField jacobian_per_cell(const MultiBlockDomain& domain, const GridCoordinates& phi);

/// Exact volume of each trilinear hexahedron (2x2x2 Gauss on det grad(phi)).
CellField cell_volumes(const MultiBlockDomain& domain, const GridCoordinates& phi);

/// Deformed cell centres (mean of the 8 corner positions).
std::vector<std::vector<Vec3>> cell_centers(const MultiBlockDomain& domain,
                                            const GridCoordinates& phi);

struct HRatioStats {
  double mean = 0.0;
  double relative_stddev = 0.0;
};

/// Statistics of H = J / f(phi) over all cells, f interpolated from its nodal
/// values at each deformed cell centre.
HRatioStats h_ratio_stats(const MultiBlockDomain& domain, const GridCoordinates& phi,
                          const MonitorField& f);

/// Largest distance between the two stored copies of any interface node.
double interface_mismatch(const MultiBlockDomain& domain, const GridCoordinates& phi);

/// Largest disagreement of the x-normal difference quotient of omega across
/// interface-interior nodes, computed from each side's own storage.
double interface_derivative_mismatch(const MultiBlockDomain& domain, const ScalarField& omega);

struct FoldedCell {
  int block_id = 0;
  Index3 cell;
  double jacobian = 0.0;
};

struct FoldingReport {
  bool pass = true;
  std::vector<FoldedCell> folded;
};

/// Fails iff some cell has J <= 0.
FoldingReport folding_check(const MultiBlockDomain& domain, const GridCoordinates& phi);

struct GridReport {
  PhaseTime stamp;
  double min_jacobian = 0.0;
  double max_jacobian = 0.0;
  double min_volume = 0.0;
  double max_volume = 0.0;
  double h_mean = 0.0;
  double h_rsd = 0.0;
  double interface_mismatch = 0.0;
  double total_volume = 0.0;
};

GridReport grid_report(const MultiBlockDomain& domain, const GridCoordinates& phi,
                       const std::optional<MonitorField>& f);

std::string format_stamp(const PhaseTime& stamp);
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const GridReport& report);

}  // namespace mbdeform
