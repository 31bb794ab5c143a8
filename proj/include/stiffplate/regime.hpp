#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stiffplate/rational.hpp"

namespace stiffplate {

enum class Branch { WgtH, HgtW, WeqH };

std::string to_string(Branch b);

/// Width/height exponents of the stiffener and the derived quantities
/// k = (w+h-1)/2, M = max(w,h), m = min(w,h).
/// When built from rationals the exact values are kept and all sign tests
/// are exact.
struct ScalingExponents {
  double w = 0, h = 0, k = 0, M = 0, m = 0;
  std::optional<Rational> w_exact, h_exact;

  bool exact() const { return w_exact.has_value(); }
};

ScalingExponents derive_exponents(double w, double h);
ScalingExponents derive_exponents(const Rational& w, const Rational& h);

/// Index order used by every four-component array below.
enum JunctionIndex : int { kAxial = 0, kLateral = 1, kVertical = 2, kTorsion = 3 };

/// Discriminants k, k+w, k+h-1, k+M-1 as doubles.
std::array<double, 4> discriminants(const ScalingExponents& e);

/// Sign of each discriminant, exact for rational exponents and with an
/// absolute zero band `tol` otherwise.
std::array<int, 4> discriminant_signs(const ScalingExponents& e, double tol = 1e-12);

struct JunctionRule {
  std::array<int, 4> rho_hat{};
  std::array<int, 4> rho_check{};
  Branch branch = Branch::WeqH;
  std::array<int, 4> sign_vector{};
  std::optional<std::string> case_letter;
  /// True for the three configurations with a known recovery sequence.
  bool proved = false;
};

JunctionRule junction_flags(const ScalingExponents& e, double tol = 1e-12);

/// User-supplied letters for sign vectors, read from lines `-,-,0,+ = C`.
/// Comment lines start with '#'.
class CaseAliases {
 public:
  static CaseAliases from_file(const std::string& path);
  static CaseAliases from_text(const std::string& text);

  std::optional<std::string> lookup(const std::array<int, 4>& signs) const;
  void set(const std::array<int, 4>& signs, const std::string& letter);
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::array<int, 4>, std::string> table_;
};

JunctionRule classify_case(const ScalingExponents& e, const CaseAliases* aliases = nullptr,
                           double tol = 1e-12);

std::string format_sign_vector(const std::array<int, 4>& signs);

/// One-line reading of the active junction conditions.
std::string describe_case(const JunctionRule& rule);

struct LimitProblemId {
  Branch branch;
  std::string case_id;
};

std::vector<LimitProblemId> enumerate_limit_problems();

}  // namespace stiffplate
