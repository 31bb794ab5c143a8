#pragma once

#include <array>

namespace stiffplate {

/// Cubic Hermite basis on an element of length h at local coordinate
/// t in [0,1]. Order: value at left, slope at left, value at right,
/// slope at right. Derivatives are with respect to the physical coordinate.
struct HermiteValues {
  std::array<double, 4> n, d1, d2;
};

HermiteValues hermite_cubic(double t, double h);

/// Linear Lagrange basis (left, right) and its derivative.
struct LinearValues {
  std::array<double, 2> n, d1;
};

LinearValues lagrange_linear(double t, double h);

}  // namespace stiffplate
