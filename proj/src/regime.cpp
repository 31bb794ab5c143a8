#include "stiffplate/regime.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stiffplate {

namespace {

int sign_with_tol(double v, double tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_sign(const std::string& token) {
  const std::string t = trim(token);
  if (t == "-") return -1;
  if (t == "0") return 0;
  if (t == "+") return 1;
  throw std::invalid_argument("bad sign token '" + t + "' in case alias file");
}

}  // namespace

std::string to_string(Branch b) {
  switch (b) {
    case Branch::WgtH: return "WgtH";
    case Branch::HgtW: return "HgtW";
    case Branch::WeqH: return "WeqH";
  }
  return "?";
}

ScalingExponents derive_exponents(double w, double h) {
  if (!(w > 0)) throw std::domain_error("width exponent w must be positive");
  if (!(h > 0 && h < 1)) throw std::domain_error("height exponent h must lie in (0,1)");
  ScalingExponents e;
  e.w = w;
  e.h = h;
  e.k = (w + h - 1) / 2;
  e.M = std::max(w, h);
  e.m = std::min(w, h);
  return e;
}

ScalingExponents derive_exponents(const Rational& w, const Rational& h) {
  if (w.sign() <= 0) throw std::domain_error("width exponent w must be positive");
  if (h.sign() <= 0 || h >= Rational(1)) throw std::domain_error("height exponent h must lie in (0,1)");
  ScalingExponents e = derive_exponents(w.to_double(), h.to_double());
  e.k = ((w + h - Rational(1)) / Rational(2)).to_double();
  e.w_exact = w;
  e.h_exact = h;
  return e;
}

std::array<double, 4> discriminants(const ScalingExponents& e) {
  return {e.k, e.k + e.w, e.k + e.h - 1, e.k + e.M - 1};
}

std::array<int, 4> discriminant_signs(const ScalingExponents& e, double tol) {
  if (e.exact()) {
    const Rational& w = *e.w_exact;
    const Rational& h = *e.h_exact;
    const Rational one(1);
    const Rational k = (w + h - one) / Rational(2);
    const Rational M = std::max(w, h);
    return {k.sign(), (k + w).sign(), (k + h - one).sign(), (k + M - one).sign()};
  }
  const auto d = discriminants(e);
  return {sign_with_tol(d[0], tol), sign_with_tol(d[1], tol), sign_with_tol(d[2], tol),
          sign_with_tol(d[3], tol)};
}

JunctionRule junction_flags(const ScalingExponents& e, double tol) {
  JunctionRule r;
  r.sign_vector = discriminant_signs(e, tol);
  for (int i = 0; i < 4; ++i) {
    r.rho_hat[i] = r.sign_vector[i] > 0 ? 0 : 1;
    r.rho_check[i] = r.sign_vector[i] < 0 ? 0 : 1;
  }
  int cmp = 0;
  if (e.exact()) {
    cmp = *e.w_exact > *e.h_exact ? 1 : (*e.w_exact < *e.h_exact ? -1 : 0);
  } else {
    cmp = sign_with_tol(e.w - e.h, tol);
  }
  r.branch = cmp > 0 ? Branch::WgtH : (cmp < 0 ? Branch::HgtW : Branch::WeqH);
  return r;
}

CaseAliases CaseAliases::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open case alias file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

CaseAliases CaseAliases::from_text(const std::string& text) {
  CaseAliases out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("case alias line without '=': " + line);
    std::array<int, 4> signs{};
    std::istringstream lhs(line.substr(0, eq));
    std::string tok;
    int n = 0;
    while (std::getline(lhs, tok, ',')) {
      if (n >= 4) throw std::invalid_argument("case alias needs four signs: " + line);
      signs[n++] = parse_sign(tok);
    }
    if (n != 4) throw std::invalid_argument("case alias needs four signs: " + line);
    const std::string letter = trim(line.substr(eq + 1));
    if (letter.empty()) throw std::invalid_argument("empty case letter: " + line);
    out.set(signs, letter);
  }
  return out;
}

std::optional<std::string> CaseAliases::lookup(const std::array<int, 4>& signs) const {
  const auto it = table_.find(signs);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

void CaseAliases::set(const std::array<int, 4>& signs, const std::string& letter) {
  table_[signs] = letter;
}

JunctionRule classify_case(const ScalingExponents& e, const CaseAliases* aliases, double tol) {
  JunctionRule r = junction_flags(e, tol);
  const auto& s = r.sign_vector;
  const bool all_neg = s[0] < 0 && s[1] < 0 && s[2] < 0 && s[3] < 0;
  const bool all_pos = s[0] > 0 && s[1] > 0 && s[2] > 0 && s[3] > 0;
  if (s == std::array<int, 4>{0, 1, -1, -1}) {
    r.case_letter = "G";
    r.proved = r.branch == Branch::WgtH;
  } else if (all_neg) {
    r.case_letter = "A";
    r.proved = r.branch != Branch::WgtH;
  } else if (all_pos) {
    r.case_letter = "E";
    r.proved = true;
  } else if (aliases) {
    r.case_letter = aliases->lookup(s);
  }
  return r;
}

std::string format_sign_vector(const std::array<int, 4>& signs) {
  std::string out;
  for (int i = 0; i < 4; ++i) {
    if (i) out += ',';
    out += signs[i] > 0 ? '+' : (signs[i] < 0 ? '-' : '0');
  }
  return out;
}

std::string describe_case(const JunctionRule& rule) {
  static const char* plate_trace[4] = {"xi1(x1,0) - (T/2) d1 xi3(x1,0)", "xi2(x1,0) - (T/2) d2 xi3(x1,0)",
                                       "xi3(x1,0)", "d2 xi3(x1,0)"};
  static const char* beam_field[4] = {"beam xi1", "beam xi2", "beam xi3", "theta"};
  std::string summary = "junction conditions";
  if (rule.case_letter == "G") {
    summary = "beam inherits axial trace; plate deflection pinned on line";
  } else if (rule.case_letter == "E") {
    summary = "stiffener asymptotically inert";
  } else if (rule.case_letter == "A") {
    summary = "plate clamped along junction line";
  }
  std::string out = summary;
  for (int i = 0; i < 4; ++i) {
    out += "\n  ";
    if (rule.rho_hat[i] && rule.rho_check[i]) {
      out += std::string(plate_trace[i]) + " = " + beam_field[i];
    } else if (rule.rho_hat[i]) {
      out += std::string(plate_trace[i]) + " = 0";
    } else {
      out += std::string(beam_field[i]) + " = 0";
    }
  }
  return out;
}

std::vector<LimitProblemId> enumerate_limit_problems() {
  std::vector<LimitProblemId> out;
  for (const char* c : {"A", "B", "C", "D", "E", "F", "G", "I", "J"}) out.push_back({Branch::WgtH, c});
  for (const char* c : {"A", "B", "C", "E", "F", "G", "H"}) out.push_back({Branch::HgtW, c});
  for (const char* c : {"A", "B", "C", "E", "F", "G", "H_or_I"}) out.push_back({Branch::WeqH, c});
  return out;
}

}  // namespace stiffplate
