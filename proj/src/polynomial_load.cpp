#include "stiffplate/polynomial_load.hpp"

#include <algorithm>
#include <cmath>

namespace stiffplate {

namespace {

double ipow(double x, int p) {
  double r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

LoadSpec LoadSpec::constant(double c) {
  LoadSpec s;
  if (c != 0) s.terms.push_back({c, {0, 0, 0}});
  return s;
}

double LoadSpec::operator()(double x1, double x2, double x3) const {
  if (x1_window && (x1 < x1_window->first || x1 > x1_window->second)) return 0.0;
  double v = 0;
  for (const PolyTerm& t : terms) v += t.coef * ipow(x1, t.powers[0]) * ipow(x2, t.powers[1]) * ipow(x3, t.powers[2]);
  return v;
}

bool LoadSpec::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const PolyTerm& t) { return t.coef == 0; });
}

int LoadSpec::degree() const {
  int d = 0;
  for (const PolyTerm& t : terms) d = std::max(d, t.powers[0] + t.powers[1] + t.powers[2]);
  return d;
}

std::pair<double, double> LoadSpec::clip(double a, double b) const {
  if (!x1_window) return {a, b};
  return {std::max(a, x1_window->first), std::min(b, x1_window->second)};
}

bool Loads::is_zero() const {
  for (const auto& s : plate)
    if (!s.is_zero()) return false;
  for (const auto& s : beam)
    if (!s.is_zero()) return false;
  return torque.is_zero();
}

}  // namespace stiffplate
