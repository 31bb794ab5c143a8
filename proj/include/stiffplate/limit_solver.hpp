#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stiffplate/cross_section.hpp"
#include "stiffplate/material.hpp"
#include "stiffplate/polynomial_load.hpp"
#include "stiffplate/regime.hpp"

namespace stiffplate {

struct Geometry {
  double L = 1, T = 1, W = 0.5, H = 1;
};

void validate(const Geometry& g);

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Structured n1 x n2 rectangle mesh of (-L,L)^2. n2 must be even so that
/// x2 = 0 is a grid line. Beam nodes coincide with the plate nodes in x1.
struct PlateMesh {
  double L = 1;
  int n1 = 0, n2 = 0;

  int nodes() const { return (n1 + 1) * (n2 + 1); }
  int node(int i1, int i2) const { return i1 + (n1 + 1) * i2; }
  double x1(int i1) const { return -L + 2 * L * i1 / n1; }
  double x2(int i2) const { return -L + 2 * L * i2 / n2; }
  double h1() const { return 2 * L / n1; }
  double h2() const { return 2 * L / n2; }
  int junction_row() const { return n2 / 2; }
};

PlateMesh make_plate_mesh(double L, int n1, int n2);

/// Per plate node: w, w_x, w_y, w_xy (bicubic Hermite deflection) and the
/// bilinear membrane fields z1, z2 with xi_a = z_a + (T/2) d_a w.
enum PlateDof : int { kW = 0, kWx, kWy, kWxy, kZ1, kZ2, kPlateDofs };
/// Per beam node: axial (linear), lateral and vertical deflections with
/// slopes (cubic Hermite), torsion angle (linear).
enum BeamDof : int { kB1 = 0, kB2, kB2d, kB3, kB3d, kTheta, kBeamDofs };

struct DofLayout {
  PlateMesh mesh;
  int plate(int node, int c) const { return kPlateDofs * node + c; }
  int beam(int i1, int c) const { return kPlateDofs * mesh.nodes() + kBeamDofs * i1 + c; }
  int plate_size() const { return kPlateDofs * mesh.nodes(); }
  int size() const { return plate_size() + kBeamDofs * (mesh.n1 + 1); }
};

/// Quadratic form on the plate block (indices as in DofLayout).
SparseMatrix assemble_plate_energy(const Geometry& g, const IsotropicMaterial& mat, const PlateMesh& mesh);

struct BeamStiffness {
  double EA = 0, ES2 = 0, EJ2 = 0, EJ3 = 0, muJt = 0;
};

BeamStiffness beam_stiffness(const IsotropicMaterial& mat, const CrossSection& xs, Branch branch,
                             const TorsionField* torsion);

/// Quadratic form on the beam block, same global indexing as the plate.
SparseMatrix assemble_beam_energy(const BeamStiffness& bs, const PlateMesh& mesh);

/// Result of the exact elimination: every global dof is either zero or
/// an alias of one reduced unknown.
struct ConstraintSet {
  std::vector<int> reduced_index;  // -1 for dofs forced to zero
  int reduced_size = 0;
  SparseMatrix prolongation() const;
};

/// Clamping at x1 = L plus the junction conditions selected by `rule`.
ConstraintSet apply_junction(const JunctionRule& rule, const PlateMesh& mesh);

/// Linear functional of the applied loads (Kirchhoff-Love and
/// Bernoulli-Navier reconstructions, integrated through the thickness and
/// over the section).
Eigen::VectorXd assemble_loads(const Loads& loads, const Geometry& g, const PlateMesh& mesh);

struct PlatePoint {
  double xi1 = 0, xi2 = 0, xi3 = 0, d1xi3 = 0, d2xi3 = 0;
};

struct BeamPoint {
  double xi1 = 0, xi2 = 0, xi3 = 0, d1xi2 = 0, d1xi3 = 0, theta = 0;
};

struct LimitState {
  Geometry geom;
  PlateMesh mesh;
  Eigen::VectorXd u;  // full dof vector

  PlatePoint plate_at(double x1, double x2) const;
  BeamPoint beam_at(double x1) const;
};

struct SolveReport {
  LimitState state;
  JunctionRule rule;
  BeamStiffness beam;
  double energy = 0;        // stored minus work
  double energy_check = 0;  // -1/2 f.u at the minimizer
  double W_plate = 0, W_beam = 0, work = 0;
  double constraint_residual = 0;
  double solver_residual = 0;
  int reduced_dofs = 0;
  std::string status;  // "proved Gamma-limit" or "conjectured Gamma-limit"
};

struct LimitMeshSpec {
  int n1 = 32, n2 = 32;
  int torsion_grid = 64;
};

SolveReport solve(const Geometry& g, const IsotropicMaterial& mat, const JunctionRule& rule, const Loads& loads,
                  const LimitMeshSpec& spec, const TorsionField* torsion = nullptr);

/// Largest violation of the junction and clamping conditions at the
/// junction-line and clamped-edge nodes.
double junction_residual(const LimitState& s, const JunctionRule& rule);

/// Energy of an arbitrary full dof vector: 1/2 u.K u - f.u.
double evaluate_energy(const SparseMatrix& K, const Eigen::VectorXd& f, const Eigen::VectorXd& u);

}  // namespace stiffplate
