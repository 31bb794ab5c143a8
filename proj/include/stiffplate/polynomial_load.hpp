#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace stiffplate {

struct PolyTerm {
  double coef = 0;
  std::array<int, 3> powers{0, 0, 0};
};

/// Polynomial density in (x1, x2, x3), optionally restricted to an x1 window.
struct LoadSpec {
  std::vector<PolyTerm> terms;
  std::optional<std::pair<double, double>> x1_window;

  static LoadSpec constant(double c);
  double operator()(double x1, double x2, double x3) const;
  bool is_zero() const;
  int degree() const;
  /// Intersection of [a, b] with the window; empty when b <= a.
  std::pair<double, double> clip(double a, double b) const;
};

struct Loads {
  std::array<LoadSpec, 3> plate;  // on (-L,L)^2 x (0,T)
  std::array<LoadSpec, 3> beam;   // on (-L,L) x (-W,W) x (0,H)
  LoadSpec torque;                // m(x1)

  bool is_zero() const;
};

}  // namespace stiffplate
