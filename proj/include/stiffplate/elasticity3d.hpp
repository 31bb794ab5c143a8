#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stiffplate/material.hpp"
#include "stiffplate/mesh3d.hpp"
#include "stiffplate/polynomial_load.hpp"

namespace stiffplate {

/// Hexahedron with condensed incompatible (bubble) modes, or plain trilinear.
enum class HexElement { Incompatible, Trilinear };

using HexMatrix = Eigen::Matrix<double, 24, 24>;

/// Stiffness of an axis-aligned box with edge lengths (a, b, c); local dof
/// order is corner-major (corners lexicographic, x fastest), then component.
HexMatrix hex_stiffness(const IsotropicMaterial& mat, double a, double b, double c, HexElement type);

/// Physical body force at a point of a cell with the given tag.
using BodyForce = std::function<Eigen::Vector3d(double, double, double, CellTag)>;

/// Body force on the physical domain whose scaled work converges to the
/// limit load functional: plate densities act through (b1, b2, eps b3) at
/// x3/eps, stiffener densities through eps^-k (b1, eps^w b2, eps^h b3) at
/// the fixed section coordinates plus the torque couple eps^-m m / I_G,
/// and junction cells take half of each.
BodyForce push_forward_loads(const Loads& loads, const Geometry& g, const ScalingExponents& e, double eps);

struct Solve3DOptions {
  HexElement element = HexElement::Incompatible;
  double rel_tol = 1e-9;
  int max_iterations = 50000;
  int threads = 1;
  /// Assemble in a fixed cell order regardless of the thread schedule.
  bool ordered = true;
};

struct Solution3D {
  Eigen::VectorXd u;  // 3 per compact node
  double stored = 0, work = 0, energy = 0;
  double W_plate = 0, W_stiffener = 0;  // junction cells split half and half
  int dofs = 0;
  int iterations = 0;
  double residual = 0;
};

/// Full (unclamped) stiffness matrix, 3 dofs per compact node.
Eigen::SparseMatrix<double> assemble_stiffness_3d(const Mesh3D& mesh, const IsotropicMaterial& mat,
                                                  const Solve3DOptions& opt = {});

Solution3D assemble_and_minimize(const Mesh3D& mesh, const IsotropicMaterial& mat, const BodyForce& load,
                                 const Solve3DOptions& opt = {});

/// Trilinear interpolation of the nodal displacement.
Eigen::Vector3d displacement_at(const Mesh3D& mesh, const Eigen::VectorXd& u, double x1, double x2, double x3);

/// Generalized quantities read off a 3D displacement.
struct Extracted {
  // plate sample points (x1, x2) with area weights
  std::vector<double> px1, px2, pw;
  std::vector<double> xi3, zeta1, zeta2;  // eps * mean u3, mean u1, mean u2 over the thickness
  // beam stations with length weights
  std::vector<double> bx1, bw;
  std::vector<double> xi1, xi2, xi3_beam, theta_scaled, theta_phys;
  // junction averages along x1 at the stations
  std::vector<double> plate_trace1, beam_trace1;
  double junction_diagnostic = 0;
};

Extracted extract_generalized(const Mesh3D& mesh, const Eigen::VectorXd& u, int plate_cells = 16,
                              int stations = 32);

/// Scaled strain on the fixed plate domain: sym(Q^-1 grad(u_hat) Q^-1), Q = diag(1,1,eps).
Eigen::Matrix3d scaled_plate_strain(const Eigen::Matrix3d& grad_u_hat, double eps);
/// Scaled strain on the fixed stiffener domain, Q = diag(1, eps^w, eps^h).
Eigen::Matrix3d scaled_beam_strain(const Eigen::Matrix3d& grad_u_check, const ScalingExponents& e, double eps);

}  // namespace stiffplate
