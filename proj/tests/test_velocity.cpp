#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mbdeform/velocity.hpp"

using namespace mbdeform;

namespace {

bool all_neighbours(const MultiBlockDomain& d, std::size_t g, int axis) {
  Index3 lo = d.lattice_node(g);
  Index3 hi = lo;
  --lo[static_cast<std::size_t>(axis)];
  ++hi[static_cast<std::size_t>(axis)];
  return d.find_node(lo) >= 0 && d.find_node(hi) >= 0;
}

double gradient_error(int n) {
  const auto d = build_backstep(n);
  const double pi = std::numbers::pi;
  const auto w = ScalarField::sample(d, [pi](const Vec3& p) {
    return std::sin(pi * p.x / 2.0) * std::cos(pi * p.y / 2.0) * std::sin(pi * p.z);
  });
  const auto grad = gradient(d, w);
  double worst = 0.0;
  for (std::size_t p = 0; p < d.block_count(); ++p) {
    const auto& b = d.block(p);
    for (std::size_t i = 0; i < b.node_count(); ++i) {
      const std::size_t g = d.global_node(p, i);
      const Vec3 x = b.reference_position(b.node_at(i));
      const Vec3 exact{pi / 2.0 * std::cos(pi * x.x / 2.0) * std::cos(pi * x.y / 2.0) * std::sin(pi * x.z),
                       -pi / 2.0 * std::sin(pi * x.x / 2.0) * std::sin(pi * x.y / 2.0) * std::sin(pi * x.z),
                       pi * std::sin(pi * x.x / 2.0) * std::cos(pi * x.y / 2.0) * std::cos(pi * x.z)};
      for (int a = 0; a < 3; ++a) {
        if (!all_neighbours(d, g, a)) continue;
        const auto sa = static_cast<std::size_t>(a);
        worst = std::max(worst, std::abs(grad.at(p, i)[sa] - exact[sa]));
      }
    }
  }
  return worst;
}

MonitorField unit_monitor(const MultiBlockDomain& d) {
  return MonitorField{ScalarField(d, 1.0), {}, 1.0};
}

}  // namespace

TEST(Velocity, LinearPotentialHasExactGradient) {
  const auto d = build_backstep(5);
  const auto w = ScalarField::sample(d, [](const Vec3& p) { return 2.0 * p.x - 3.0 * p.y + 0.5 * p.z; });
  const auto grad = gradient(d, w);
  const Vec3 exact{2.0, -3.0, 0.5};
  for (std::size_t p = 0; p < d.block_count(); ++p) {
    for (std::size_t i = 0; i < d.block(p).node_count(); ++i) {
      const std::size_t g = d.global_node(p, i);
      for (int a = 0; a < 3; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        const double expected = all_neighbours(d, g, a) ? exact[sa] : 0.0;
        EXPECT_NEAR(grad.at(p, i)[sa], expected, 1e-12);
      }
    }
  }
}

TEST(Velocity, QuadraticCentralDifference) {
  const auto d = build_unit_block(4);
  const auto w = ScalarField::sample(d, [](const Vec3& p) { return p.x * p.x; });
  const auto grad = gradient(d, w);
  const auto& b = d.block(0);
  EXPECT_NEAR(grad.at(0, b.node_index({2, 2, 2})).x, 1.0, 1e-14);
  EXPECT_NEAR(grad.at(0, b.node_index({1, 3, 0})).x, 0.5, 1e-14);
  // Mirror at the wall.
  EXPECT_EQ(grad.at(0, b.node_index({4, 2, 2})).x, 0.0);
}

TEST(Velocity, GradientIsSecondOrder) {
  const double ratio = gradient_error(10) / gradient_error(20);
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 5.0);
}

TEST(Velocity, FaceProjection) {
  const auto d = build_backstep(4);
  const VectorField grad(d, Vec3{0.1, -0.2, 0.3});
  const auto v = node_velocity(d, unit_monitor(d), grad);
  const auto p1 = d.block_position(1);
  const auto& b1 = d.block(p1);
  EXPECT_EQ(v.eta.at(p1, b1.node_index({2, 0, 2})), (Vec3{0.1, 0.0, 0.3}));
  EXPECT_EQ(v.eta.at(p1, b1.node_index({2, 2, 2})), (Vec3{0.1, -0.2, 0.3}));
  EXPECT_EQ(v.eta.at(p1, b1.node_index({0, 0, 2})), (Vec3{0.0, 0.0, 0.3}));
  EXPECT_EQ(v.eta.at(p1, b1.node_index({0, 0, 0})), (Vec3{0.0, 0.0, 0.0}));
  // Interface nodes move freely across x = 1; the step wall does not.
  EXPECT_EQ(v.eta.at(p1, b1.node_index({4, 2, 2})), (Vec3{0.1, -0.2, 0.3}));
  EXPECT_EQ(v.eta.at(p1, b1.node_index({4, 6, 2})), (Vec3{0.0, -0.2, 0.3}));
  // The re-entrant edge is pinned in x and y.
  EXPECT_EQ(v.eta.at(p1, b1.node_index({4, 4, 2})), (Vec3{0.0, 0.0, 0.3}));
  EXPECT_EQ(v.grad.at(p1, b1.node_index({2, 0, 2})), (Vec3{0.1, -0.2, 0.3}));
}

TEST(Velocity, EtaScalesWithMonitor) {
  const auto d = build_backstep(3);
  const VectorField grad(d, Vec3{1.0, 1.0, 1.0});
  const MonitorField f{ScalarField::sample(d, [](const Vec3& p) { return 1.0 + p.x; }), {}, 1.0};
  const auto v = node_velocity(d, f, grad);
  const auto p2 = d.block_position(2);
  const auto& b2 = d.block(p2);
  const auto i = b2.node_index({1, 1, 1});
  const double fx = 1.0 + b2.reference_position({1, 1, 1}).x;
  EXPECT_DOUBLE_EQ(v.eta.at(p2, i).x, fx);
}

TEST(Velocity, LocateSphereCentre) {
  const auto d = build_backstep(20);
  const auto at = locate(d, {0.5, 1.5, 0.5});
  EXPECT_EQ(d.block(at.block).id(), 1);
  EXPECT_EQ(at.cell, (Index3{10, 30, 10}));
  EXPECT_NEAR(at.local.x, 0.0, 1e-12);
  EXPECT_NEAR(at.local.y, 0.0, 1e-12);
  EXPECT_NEAR(at.local.z, 0.0, 1e-12);
}

TEST(Velocity, LocateBlock2AndOutside) {
  const auto d = build_backstep(4);
  const auto at = locate(d, {1.6, 0.1, 0.9});
  EXPECT_EQ(d.block(at.block).id(), 2);
  EXPECT_EQ(at.cell, (Index3{2, 0, 3}));
  EXPECT_NEAR(at.local.x, 0.4, 1e-12);
  EXPECT_NEAR(at.local.y, 0.4, 1e-12);
  EXPECT_NEAR(at.local.z, 0.6, 1e-12);
  const auto corner = locate(d, {2.0, 1.0, 1.0});
  EXPECT_EQ(d.block(corner.block).id(), 2);
  EXPECT_THROW(locate(d, {2.5, 0.5, 0.5}), OutOfDomainError);
  // Behind the step.
  EXPECT_THROW(locate(d, {1.5, 1.5, 0.5}), OutOfDomainError);
  EXPECT_THROW(locate(d, {0.5, 0.5, -0.01}), OutOfDomainError);
}

TEST(Velocity, TrilinearReproducesLinearFields) {
  const auto d = build_backstep(4);
  const ScalarField constant(d, 7.5);
  const auto linear = ScalarField::sample(d, [](const Vec3& p) { return 1.0 + p.x - 2.0 * p.y + 3.0 * p.z; });
  for (const Vec3 p : {Vec3{0.13, 1.71, 0.44}, Vec3{1.92, 0.03, 0.61}, Vec3{1.0, 0.5, 0.5},
                       Vec3{0.99, 0.99, 0.01}}) {
    const auto at = locate(d, p);
    EXPECT_NEAR(interpolate(d, constant, at), 7.5, 1e-13);
    EXPECT_NEAR(interpolate(d, linear, at), 1.0 + p.x - 2.0 * p.y + 3.0 * p.z, 1e-13);
  }
}

TEST(Velocity, TrilinearCellCentreAveragesCorners) {
  const auto d = build_unit_block(2);
  const auto& b = d.block(0);
  ScalarField alternating(d, 0.0);
  for (std::size_t i = 0; i < b.node_count(); ++i) {
    const Index3 n = b.node_at(i);
    alternating.at(0, i) = (n.i + n.j + n.k) % 2 == 0 ? 1.0 : 0.0;
  }
  EXPECT_NEAR(interpolate(d, alternating, locate(d, {0.25, 0.25, 0.25})), 0.5, 1e-15);
  EXPECT_NEAR(interpolate(d, alternating, locate(d, {0.5, 0.5, 0.5})), 0.0, 1e-15);
}

TEST(Velocity, SingleValuedAcrossInterface) {
  const auto d = build_backstep(4);
  const VelocityField v{VectorField::sample(d, [](const Vec3& p) {
                          return Vec3{std::sin(3.0 * p.y), p.x * p.z, std::cos(p.x + p.y)};
                        }),
                        VectorField(d, Vec3{})};
  const auto p1 = d.block_position(1);
  const auto p2 = d.block_position(2);
  for (const Vec3 p : {Vec3{1.0, 0.3, 0.7}, Vec3{1.0, 0.9, 0.15}, Vec3{1.0, 0.5, 0.5}}) {
    const Vec3 a = interpolate(d, v.eta, locate_in_block(d, p1, p));
    const Vec3 b = interpolate(d, v.eta, locate_in_block(d, p2, p));
    EXPECT_LT(distance(a, b), 1e-13);
  }
}

TEST(Velocity, NoOutflowThroughFaces) {
  const auto d = build_backstep(4);
  const VectorField grad = VectorField::sample(d, [](const Vec3& p) {
    return Vec3{1.0 + p.y, -1.0 - p.z, 0.5 - p.x};
  });
  const auto v = node_velocity(d, unit_monitor(d), grad);
  const struct {
    Vec3 p;
    int axis;
  } cases[] = {{{0.37, 0.0, 0.61}, 1}, {{0.0, 1.37, 0.21}, 0}, {{1.0, 1.4, 0.3}, 0},
               {{1.55, 1.0, 0.8}, 1},  {{1.8, 0.2, 1.0}, 2},  {{2.0, 0.65, 0.45}, 0},
               {{0.3, 2.0, 0.5}, 1}};
  for (const auto& c : cases) {
    const Vec3 u = interpolate_velocity(d, v, c.p);
    EXPECT_EQ(u[static_cast<std::size_t>(c.axis)], 0.0) << c.p.x << " " << c.p.y << " " << c.p.z;
  }
  // Interior points keep all components.
  const Vec3 inside = interpolate_velocity(d, v, {0.4, 0.4, 0.4});
  EXPECT_NE(inside.x, 0.0);
  EXPECT_NE(inside.y, 0.0);
}

TEST(Velocity, BoundaryNormalsAtPoints) {
  const auto d = build_backstep(4);
  EXPECT_TRUE(boundary_normals_at(d, {0.5, 0.5, 0.5}).empty());
  EXPECT_TRUE(boundary_normals_at(d, {1.0, 0.5, 0.5}).empty());
  const auto wall = boundary_normals_at(d, {1.0, 1.5, 0.5});
  EXPECT_TRUE(wall.contains(Direction::XPlus));
  EXPECT_EQ(wall.count(), 1);
  const auto step_top = boundary_normals_at(d, {1.5, 1.0, 0.5});
  EXPECT_TRUE(step_top.contains(Direction::YPlus));
  EXPECT_EQ(step_top.count(), 1);
  const auto edge = boundary_normals_at(d, {1.0, 1.0, 0.3});
  EXPECT_TRUE(edge.has_axis(0));
  EXPECT_TRUE(edge.has_axis(1));
  EXPECT_FALSE(edge.has_axis(2));
  const auto corner = boundary_normals_at(d, {2.0, 0.0, 1.0});
  EXPECT_TRUE(corner.contains(Direction::XPlus));
  EXPECT_TRUE(corner.contains(Direction::YMinus));
  EXPECT_TRUE(corner.contains(Direction::ZPlus));
  // At nodes this agrees with the domain's own normals.
  for (std::size_t g = 0; g < d.unique_node_count(); ++g) {
    EXPECT_EQ(boundary_normals_at(d, d.lattice_position(d.lattice_node(g))), d.boundary_normals(g));
  }
}
