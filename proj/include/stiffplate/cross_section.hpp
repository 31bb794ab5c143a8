#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace stiffplate {

/// Rectangle (-W,W) x (0,H) and its integral constants.
struct CrossSection {
  double W = 0, H = 0;
  double A = 0;     // 2WH
  double S2 = 0;    // int x3
  double J2 = 0;    // int x3^2
  double J3 = 0;    // int x2^2
  double Jt_w = 0;  // 4 int x2^2
  double Jt_h = 0;  // 4 int (x3 - H/2)^2
  double IG = 0;    // polar moment about the centroid (0, H/2)

  double centroid2() const { return 0.0; }
  double centroid3() const { return 0.5 * H; }
  double centered_J2() const { return J2 - S2 * S2 / A; }
};

CrossSection constants(double W, double H);

/// Discrete torsion function on an n x n grid of (-W,W) x (0,H).
struct TorsionField {
  double W = 0, H = 0;
  int n2 = 0, n3 = 0;
  /// Nodal values, index i2 + (n2+1) * i3.
  Eigen::VectorXd phi;
  double J_phi = 0;
  int iterations = 0;
  double residual = 0;

  double x2(int i2) const { return -W + 2 * W * i2 / n2; }
  double x3(int i3) const { return H * i3 / n3; }
  double value(int i2, int i3) const { return phi[i2 + (n2 + 1) * i3]; }
  /// Integral mean of phi (piecewise linear interpolant).
  double mean() const;
  /// Residual of the discrete equations, max norm relative to the load.
  double equation_residual() const;
  void write_csv(const std::string& path) const;
};

/// Piecewise-linear Galerkin solution of the Neumann problem
///   lap phi = 0, grad phi . n = (x3 - H/2) n2 - x2 n3, mean(phi) = 0,
/// with J_phi = int |grad phi - (x3 - H/2, -x2)|^2.
TorsionField solve_torsion(double W, double H, int n, double rel_tol = 1e-10);

/// Displacement samples (u2, u3) of a section with quadrature weights.
struct SectionSamples {
  std::vector<double> x2, x3, weight, u2, u3;
};

struct RigidProjection {
  double t2 = 0, t3 = 0, theta = 0;
};

/// L2 projection onto translations plus the infinitesimal rotation about
/// the centroid of the sample set.
RigidProjection project_rigid(const SectionSamples& s);

/// Tensor-product Gauss samples on (-W,W) x (0,H) with zero displacement.
SectionSamples section_quadrature(double W, double H, int cells, int order = 3);

}  // namespace stiffplate
