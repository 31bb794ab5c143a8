#include "stiffplate/hermite.hpp"

namespace stiffplate {

HermiteValues hermite_cubic(double t, double h) {
  HermiteValues v;
  const double t2 = t * t, t3 = t2 * t;
  v.n = {1 - 3 * t2 + 2 * t3, h * (t - 2 * t2 + t3), 3 * t2 - 2 * t3, h * (t3 - t2)};
  v.d1 = {(-6 * t + 6 * t2) / h, 1 - 4 * t + 3 * t2, (6 * t - 6 * t2) / h, 3 * t2 - 2 * t};
  v.d2 = {(-6 + 12 * t) / (h * h), (-4 + 6 * t) / h, (6 - 12 * t) / (h * h), (6 * t - 2) / h};
  return v;
}

LinearValues lagrange_linear(double t, double h) {
  LinearValues v;
  v.n = {1 - t, t};
  v.d1 = {-1 / h, 1 / h};
  return v;
}

}  // namespace stiffplate
