#pragma once

#include <vector>

namespace stiffplate {

struct GaussRule {
  std::vector<double> x;  // points on [-1, 1]
  std::vector<double> w;
};

/// n-point Gauss-Legendre rule, cached per n.
const GaussRule& gauss_legendre(int n);

}  // namespace stiffplate
