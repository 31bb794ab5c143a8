#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "stiffplate/reduced_density.hpp"

using namespace stiffplate;

namespace {

// Energy written out component by component, independent of the library.
double f_direct(double lambda, double mu, const std::array<double, 6>& a) {
  double tr = a[0] + a[1] + a[2];
  double sq = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + 2 * (a[3] * a[3] + a[4] * a[4] + a[5] * a[5]);
  return mu * sq + 0.5 * lambda * tr * tr;
}

// Stress-free condition on the free components: sigma_ij = 2 mu a_ij + lambda tr(a) delta_ij = 0.
std::array<double, 6> stress_free(double lambda, double mu, std::array<double, 6> a, const FreeMask& free) {
  std::vector<int> idx;
  for (int i = 0; i < 6; ++i)
    if (free[i]) idx.push_back(i);
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  double fixed_trace = 0;
  for (int i = 0; i < 3; ++i)
    if (!free[i]) fixed_trace += a[i];
  for (int r = 0; r < n; ++r) {
    int i = idx[r];
    A(r, r) += 2 * mu;
    if (i < 3) {
      for (int c = 0; c < n; ++c)
        if (idx[c] < 3) A(r, c) += lambda;
      b(r) = -lambda * fixed_trace;
    }
  }
  Eigen::VectorXd x = A.fullPivLu().solve(b);
  for (int r = 0; r < n; ++r) a[idx[r]] = x(r);
  return a;
}

double golden_min(const std::function<double(double)>& g, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (gc < gd) {
      b = d, d = c, gd = gc;
      c = b - r * (b - a), gc = g(c);
    } else {
      a = c, c = d, gc = gd;
      d = a + r * (b - a), gd = g(d);
    }
  }
  return g(0.5 * (a + b));
}

std::array<double, 6> arr(const SymStrain& s) { return {s[0], s[1], s[2], s[3], s[4], s[5]}; }

IsotropicMaterial random_material(std::mt19937& rng) {
  std::uniform_real_distribution<double> mu(0.2, 5), ratio(-0.6, 4);
  double m = mu(rng);
  return from_lame(ratio(rng) * m, m);
}

}  // namespace

TEST(ReducedDensity, PlateMatchesStressFreeMinimum) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    IsotropicMaterial m = random_material(rng);
    PlateStrain e{u(rng), u(rng), u(rng)};
    auto a = stress_free(m.lambda, m.mu, {e.e11, e.e22, 0, 0, 0, e.e12}, plate_free_mask());
    double oracle = f_direct(m.lambda, m.mu, a);
    EXPECT_NEAR(plate_density(m, e), oracle, 1e-10 * std::max(oracle, 1e-300));
    EXPECT_NEAR(oracle_min_density(m, plate_constrained(e), plate_free_mask()), oracle, 1e-10 * oracle);
  }
}

TEST(ReducedDensity, BeamMatchesStressFreeMinimum) {
  std::mt19937 rng(22);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    IsotropicMaterial m = random_material(rng);
    BeamStrain e{u(rng), u(rng), u(rng)};
    auto a = stress_free(m.lambda, m.mu, {e.e11, 0, 0, 0, e.e13, e.e12}, beam_free_mask());
    double oracle = f_direct(m.lambda, m.mu, a);
    EXPECT_NEAR(beam_density(m, e), oracle, 1e-10 * oracle);
    EXPECT_NEAR(oracle_min_density(m, beam_constrained(e), beam_free_mask()), oracle, 1e-10 * oracle);
  }
}

TEST(ReducedDensity, PlateGoldenSectionSearch) {
  // The shears a13, a23 decouple and vanish at the minimum; a33 is the only
  // coupled unknown.
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) {
    IsotropicMaterial m = random_material(rng);
    PlateStrain e{u(rng), u(rng), u(rng)};
    double best = golden_min(
        [&](double a33) { return f_direct(m.lambda, m.mu, {e.e11, e.e22, a33, 0, 0, e.e12}); }, -10, 10);
    EXPECT_NEAR(plate_density(m, e), best, 1e-9 * std::max(best, 1e-12));
  }
}

TEST(ReducedDensity, RelaxedTensorsAreStationary) {
  std::mt19937 rng(24);
  std::uniform_real_distribution<double> u(-1, 1);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    IsotropicMaterial m = random_material(rng);
    PlateStrain pe{u(rng), u(rng), u(rng)};
    BeamStrain be{u(rng), u(rng), u(rng)};
    auto zp = arr(relaxed_plate_tensor(m, pe));
    auto zb = arr(relaxed_beam_tensor(m, be));
    for (int c = 0; c < 6; ++c) {
      if (plate_free_mask()[c]) {
        auto p = zp, q = zp;
        p[c] += h, q[c] -= h;
        EXPECT_LE(std::abs(f_direct(m.lambda, m.mu, p) - f_direct(m.lambda, m.mu, q)) / (2 * h), 1e-7);
      } else {
        EXPECT_EQ(zp[c], arr(plate_constrained(pe))[c]);
      }
      if (beam_free_mask()[c]) {
        auto p = zb, q = zb;
        p[c] += h, q[c] -= h;
        EXPECT_LE(std::abs(f_direct(m.lambda, m.mu, p) - f_direct(m.lambda, m.mu, q)) / (2 * h), 1e-7);
      } else {
        EXPECT_EQ(zb[c], arr(beam_constrained(be))[c]);
      }
    }
    EXPECT_NEAR(f_direct(m.lambda, m.mu, zp), plate_density(m, pe), 1e-12 * (1 + plate_density(m, pe)));
    EXPECT_NEAR(f_direct(m.lambda, m.mu, zb), beam_density(m, be), 1e-12 * (1 + beam_density(m, be)));
  }
}

TEST(ReducedDensity, ClosedFormExamples) {
  IsotropicMaterial m = from_lame(0, 1);  // E = 2, nu = 0
  EXPECT_DOUBLE_EQ(plate_density(m, {1, 0, 0}), 1);
  EXPECT_DOUBLE_EQ(beam_density(m, {1, 0, 0}), 1);
  EXPECT_DOUBLE_EQ(beam_density(m, {0, 0.5, 0}), 0.5);
  IsotropicMaterial n = from_lame(1, 1);  // E = 5/2, nu = 1/4
  EXPECT_NEAR(plate_density(n, {1, 1, 0}), 2.5 / (2 * (1 - 0.0625)) * (2 + 0.5), 1e-14);
}

TEST(ReducedDensity, BranchRestrictions) {
  IsotropicMaterial m = from_lame(1, 1);
  EXPECT_THROW(beam_density(m, {1, 0.1, 0}, Branch::WgtH), std::invalid_argument);
  EXPECT_THROW(beam_density(m, {1, 0, 0.1}, Branch::HgtW), std::invalid_argument);
  EXPECT_NO_THROW(beam_density(m, {1, 0, 0.1}, Branch::WgtH));
  EXPECT_NO_THROW(beam_density(m, {1, 0.1, 0.1}, Branch::WeqH));
}

TEST(ReducedDensity, OracleRejectsSingularSystem) {
  IsotropicMaterial m = from_lame(1, 1);
  m.mu = 0;
  m.lambda = 0;
  EXPECT_THROW(oracle_minimizer(m, SymStrain(), plate_free_mask()), std::logic_error);
}
