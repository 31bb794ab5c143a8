#include <gtest/gtest.h>

#include "stiffplate/limit_solver.hpp"
#include "stiffplate/polynomial_load.hpp"

using namespace stiffplate;

TEST(LoadSpec, EvaluatesPolynomial) {
  LoadSpec s;
  s.terms = {{2.0, {1, 0, 0}}, {-1.0, {0, 2, 1}}, {0.5, {0, 0, 0}}};
  EXPECT_DOUBLE_EQ(s(3, 2, 0.5), 2 * 3 - 4 * 0.5 + 0.5);
  EXPECT_EQ(s.degree(), 3);
  EXPECT_FALSE(s.is_zero());
}

TEST(LoadSpec, ConstantAndZero) {
  EXPECT_TRUE(LoadSpec::constant(0).is_zero());
  EXPECT_TRUE(LoadSpec().is_zero());
  EXPECT_DOUBLE_EQ(LoadSpec::constant(1.5)(0.3, -0.2, 0.1), 1.5);
  EXPECT_EQ(LoadSpec::constant(1.5).degree(), 0);
  Loads l;
  EXPECT_TRUE(l.is_zero());
  l.torque = LoadSpec::constant(1);
  EXPECT_FALSE(l.is_zero());
}

TEST(LoadSpec, WindowRestrictsSupport) {
  LoadSpec s = LoadSpec::constant(2);
  s.x1_window = std::make_pair(-0.5, 0.25);
  EXPECT_DOUBLE_EQ(s(-0.6, 0, 0), 0);
  EXPECT_DOUBLE_EQ(s(0, 0, 0), 2);
  EXPECT_DOUBLE_EQ(s(0.3, 0, 0), 0);
  auto c = s.clip(-1, 0);
  EXPECT_DOUBLE_EQ(c.first, -0.5);
  EXPECT_DOUBLE_EQ(c.second, 0);
  auto e = s.clip(0.5, 1);
  EXPECT_LE(e.second, e.first);
}

TEST(LoadFunctional, PlateLoadIntegratesExactly) {
  // Unit deflection everywhere: the work is the integral of b3 over the plate.
  Geometry g{1.0, 0.3, 0.2, 0.6};
  PlateMesh mesh = make_plate_mesh(g.L, 6, 8);
  DofLayout lay{mesh};
  Loads l;
  l.plate[2].terms = {{1.0, {2, 0, 0}}, {3.0, {0, 1, 1}}};
  Eigen::VectorXd f = assemble_loads(l, g, mesh);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lay.size());
  for (int n = 0; n < mesh.nodes(); ++n) u[lay.plate(n, kW)] = 1;
  // int x1^2 over (-1,1)^2 x (0,T); the x2 x3 term integrates to zero.
  EXPECT_NEAR(f.dot(u), 2.0 / 3 * 2 * g.T, 1e-13);
}

TEST(LoadFunctional, WindowedBeamLoad) {
  Geometry g{1.0, 0.3, 0.2, 0.6};
  PlateMesh mesh = make_plate_mesh(g.L, 8, 8);
  DofLayout lay{mesh};
  Loads l;
  l.beam[2] = LoadSpec::constant(1);
  l.beam[2].x1_window = std::make_pair(-0.4, 0.1);  // not aligned with nodes
  Eigen::VectorXd f = assemble_loads(l, g, mesh);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lay.size());
  for (int i = 0; i <= mesh.n1; ++i) u[lay.beam(i, kB3)] = 1;
  EXPECT_NEAR(f.dot(u), 0.5 * 2 * g.W * g.H, 1e-13);
}

TEST(LoadFunctional, TorqueAndAxialLoads) {
  Geometry g{1.0, 0.3, 0.2, 0.6};
  PlateMesh mesh = make_plate_mesh(g.L, 4, 4);
  DofLayout lay{mesh};
  Loads l;
  l.torque.terms = {{1.0, {1, 0, 0}}};
  Eigen::VectorXd f = assemble_loads(l, g, mesh);
  // theta = x1 is represented exactly by the linear elements.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lay.size());
  for (int i = 0; i <= mesh.n1; ++i) u[lay.beam(i, kTheta)] = mesh.x1(i);
  EXPECT_NEAR(f.dot(u), 2.0 / 3, 1e-13);
}
