#include "stiffplate/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stiffplate {

SymStrain SymStrain::from_matrix(const Eigen::Matrix3d& a) {
  return SymStrain(a(0, 0), a(1, 1), a(2, 2), 0.5 * (a(1, 2) + a(2, 1)), 0.5 * (a(0, 2) + a(2, 0)),
                   0.5 * (a(0, 1) + a(1, 0)));
}

Eigen::Matrix3d SymStrain::matrix() const {
  Eigen::Matrix3d m;
  m << v[0], v[5], v[4],
       v[5], v[1], v[3],
       v[4], v[3], v[2];
  return m;
}

double SymStrain::dot(const SymStrain& o) const {
  return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2] +
         2.0 * (v[3] * o.v[3] + v[4] * o.v[4] + v[5] * o.v[5]);
}

SymStrain operator*(double s, const SymStrain& a) {
  SymStrain r;
  r.v = s * a.v;
  return r;
}

SymStrain operator+(const SymStrain& a, const SymStrain& b) {
  SymStrain r;
  r.v = a.v + b.v;
  return r;
}

IsotropicMaterial from_lame(double lambda, double mu) {
  if (!(mu > 0)) throw std::domain_error("shear modulus mu must be positive");
  if (!(3 * lambda + 2 * mu > 0)) throw std::domain_error("lambda must exceed -2mu/3");
  IsotropicMaterial m;
  m.lambda = lambda;
  m.mu = mu;
  m.young = mu * (2 * mu + 3 * lambda) / (mu + lambda);
  m.poisson = lambda / (2 * (lambda + mu));
  return m;
}

IsotropicMaterial from_young_poisson(double young, double poisson) {
  if (!(young > 0)) throw std::domain_error("Young modulus must be positive");
  if (!(poisson > -1 && poisson < 0.5)) throw std::domain_error("Poisson ratio must lie in (-1, 1/2)");
  IsotropicMaterial m;
  m.young = young;
  m.poisson = poisson;
  m.mu = young / (2 * (1 + poisson));
  m.lambda = young * poisson / ((1 + poisson) * (1 - 2 * poisson));
  return m;
}

SymStrain apply_elasticity(const IsotropicMaterial& mat, const SymStrain& a) {
  SymStrain r = (2 * mat.mu) * a;
  const double lt = mat.lambda * a.trace();
  r[0] += lt;
  r[1] += lt;
  r[2] += lt;
  return r;
}

double energy_density(const IsotropicMaterial& mat, const SymStrain& a) {
  const double tr = a.trace();
  return mat.mu * a.norm2() + 0.5 * mat.lambda * tr * tr;
}

double coercivity_constant(const IsotropicMaterial& mat) {
  // Deviatoric part sees mu, the spherical part mu + 3 lambda / 2.
  return std::min(mat.mu, mat.mu + 1.5 * mat.lambda);
}

}  // namespace stiffplate
