#pragma once

#include <Eigen/Core>

namespace stiffplate {

/// Symmetric 3x3 tensor stored as (11, 22, 33, 23, 13, 12) with tensorial
/// (not engineering) shear components.
struct SymStrain {
  Eigen::Matrix<double, 6, 1> v = Eigen::Matrix<double, 6, 1>::Zero();

  SymStrain() = default;
  SymStrain(double a11, double a22, double a33, double a23, double a13, double a12) {
    v << a11, a22, a33, a23, a13, a12;
  }
  static SymStrain from_matrix(const Eigen::Matrix3d& a);
  static SymStrain identity() { return SymStrain(1, 1, 1, 0, 0, 0); }

  Eigen::Matrix3d matrix() const;
  double trace() const { return v[0] + v[1] + v[2]; }
  /// Frobenius inner product; off-diagonal entries count twice.
  double dot(const SymStrain& other) const;
  double norm2() const { return dot(*this); }

  double operator[](int i) const { return v[i]; }
  double& operator[](int i) { return v[i]; }
};

SymStrain operator*(double s, const SymStrain& a);
SymStrain operator+(const SymStrain& a, const SymStrain& b);

struct IsotropicMaterial {
  double lambda = 0;
  double mu = 1;
  double young = 2;
  double poisson = 0;
};

IsotropicMaterial from_lame(double lambda, double mu);
IsotropicMaterial from_young_poisson(double young, double poisson);

/// C[A] = 2 mu A + lambda tr(A) I.
SymStrain apply_elasticity(const IsotropicMaterial& mat, const SymStrain& a);

/// f(A) = mu |A|^2 + (lambda/2) tr(A)^2.
double energy_density(const IsotropicMaterial& mat, const SymStrain& a);

/// Largest c with f(A) >= c |A|^2 for all A.
double coercivity_constant(const IsotropicMaterial& mat);

}  // namespace stiffplate
