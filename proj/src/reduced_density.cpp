#include "stiffplate/reduced_density.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace stiffplate {

double plate_density(const IsotropicMaterial& mat, const PlateStrain& e) {
  const double nu = mat.poisson;
  return mat.young / (2 * (1 - nu * nu)) *
         (e.e11 * e.e11 + e.e22 * e.e22 + 2 * nu * e.e11 * e.e22 + 2 * (1 - nu) * e.e12 * e.e12);
}

double beam_density(const IsotropicMaterial& mat, const BeamStrain& e, std::optional<Branch> branch) {
  if (branch == Branch::WgtH && e.e12 != 0)
    throw std::invalid_argument("beam strain e12 must vanish when w > h");
  if (branch == Branch::HgtW && e.e13 != 0)
    throw std::invalid_argument("beam strain e13 must vanish when h > w");
  return 0.5 * mat.young * e.e11 * e.e11 + 2 * mat.mu * (e.e12 * e.e12 + e.e13 * e.e13);
}

SymStrain relaxed_plate_tensor(const IsotropicMaterial& mat, const PlateStrain& e) {
  const double nu = mat.poisson;
  return SymStrain(e.e11, e.e22, -nu / (1 - nu) * (e.e11 + e.e22), 0, 0, e.e12);
}

SymStrain relaxed_beam_tensor(const IsotropicMaterial& mat, const BeamStrain& e) {
  const double c = -mat.poisson * e.e11;
  return SymStrain(e.e11, c, c, 0, e.e13, e.e12);
}

FreeMask plate_free_mask() { return {false, false, true, true, true, false}; }
FreeMask beam_free_mask() { return {false, true, true, true, false, false}; }

SymStrain plate_constrained(const PlateStrain& e) { return SymStrain(e.e11, e.e22, 0, 0, 0, e.e12); }
SymStrain beam_constrained(const BeamStrain& e) { return SymStrain(e.e11, 0, 0, 0, e.e13, e.e12); }

SymStrain oracle_minimizer(const IsotropicMaterial& mat, const SymStrain& fixed, const FreeMask& free) {
  // Hessian of f in the six stored components.
  Eigen::Matrix<double, 6, 6> hess = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) hess(i, j) = mat.lambda;
    hess(i, i) += 2 * mat.mu;
    hess(i + 3, i + 3) = 4 * mat.mu;
  }
  int nf = 0;
  std::array<int, 6> fidx{};
  for (int i = 0; i < 6; ++i)
    if (free[i]) fidx[nf++] = i;
  SymStrain out = fixed;
  if (nf == 0) return out;
  for (int i = 0; i < nf; ++i) out[fidx[i]] = 0;
  Eigen::MatrixXd a(nf, nf);
  Eigen::VectorXd rhs(nf);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) a(i, j) = hess(fidx[i], fidx[j]);
    rhs[i] = -(hess.row(fidx[i]) * out.v)(0);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0)
    throw std::logic_error("singular stationarity system in density minimization");
  const Eigen::VectorXd x = ldlt.solve(rhs);
  for (int i = 0; i < nf; ++i) out[fidx[i]] = x[i];
  return out;
}

double oracle_min_density(const IsotropicMaterial& mat, const SymStrain& fixed, const FreeMask& free) {
  return energy_density(mat, oracle_minimizer(mat, fixed, free));
}

}  // namespace stiffplate
