#pragma once

// Grid velocity eta = f grad(omega) on reference nodes, and its evaluation at
// arbitrary points of the domain.

#include <stdexcept>
#include <string>

#include "mbdeform/fields.hpp"
#include "mbdeform/monitor.hpp"

namespace mbdeform {

struct VelocityField {
  VectorField eta;   ///< f V with boundary-normal components zeroed
  VectorField grad;  ///< V = grad(omega)
};

/// Central differences on the lattice; zero along any axis where a
/// neighbour is missing (the Neumann mirror).
VectorField gradient(const MultiBlockDomain& domain, const ScalarField& omega);

/// eta = f V, with the components normal to the domain boundary zeroed.
VelocityField node_velocity(const MultiBlockDomain& domain, const MonitorField& f,
                            const VectorField& grad);

/// Zeroes boundary-normal components in place.
void project_to_boundary(const MultiBlockDomain& domain, VectorField& field);

class OutOfDomainError : public std::runtime_error {
 public:
  explicit OutOfDomainError(const Vec3& p);
  const Vec3& point() const { return point_; }

 private:
  Vec3 point_;
};

struct Location {
  std::size_t block = 0;  ///< block position in the domain
  Index3 cell;            ///< block-local cell index
  Vec3 local;             ///< coordinates in [0,1]^3 within the cell
};

/// Snap distance for points just outside a block face.
inline constexpr double kLocateTolerance = 1e-9;

/// Finds the cell containing p on the reference lattice. Points on a face
/// shared by two blocks go to the lower block position.
Location locate(const MultiBlockDomain& domain, const Vec3& p);

/// Same, restricted to one block; throws OutOfDomainError if p is not in it.
Location locate_in_block(const MultiBlockDomain& domain, std::size_t block, const Vec3& p);

/// Trilinear blend of the cell-corner values.
template <class T>
T interpolate(const MultiBlockDomain& domain, const BlockField<T>& field, const Location& at) {
  const auto& b = domain.block(at.block);
  const auto& v = field.block(at.block);
  const auto& c = at.cell;
  const double u = at.local.x;
  const double s = at.local.y;
  const double r = at.local.z;
  auto node = [&](int di, int dj, int dk) {
    return v[b.node_index(Index3{c.i + di, c.j + dj, c.k + dk})];
  };
  const T c00 = node(0, 0, 0) * (1.0 - u) + node(1, 0, 0) * u;
  const T c10 = node(0, 1, 0) * (1.0 - u) + node(1, 1, 0) * u;
  const T c01 = node(0, 0, 1) * (1.0 - u) + node(1, 0, 1) * u;
  const T c11 = node(0, 1, 1) * (1.0 - u) + node(1, 1, 1) * u;
  const T c0 = c00 * (1.0 - s) + c10 * s;
  const T c1 = c01 * (1.0 - s) + c11 * s;
  return c0 * (1.0 - r) + c1 * r;
}

/// Outward boundary normals of the domain at an arbitrary point (empty for
/// points off the boundary). At a node this equals the node's normals.
DirectionSet boundary_normals_at(const MultiBlockDomain& domain, const Vec3& p);

/// Trilinear velocity at p, with the components along the boundary normals
/// at p zeroed.
Vec3 interpolate_velocity(const MultiBlockDomain& domain, const VelocityField& field,
                          const Vec3& p);
Vec3 interpolate_velocity(const MultiBlockDomain& domain, const VelocityField& field,
                          const Location& at, const Vec3& p);

}  // namespace mbdeform
