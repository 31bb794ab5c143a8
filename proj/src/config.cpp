#include "stiffplate/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace stiffplate {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                std::vector<std::string>& warnings) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) warnings.push_back("unknown key '" + where + it.key() + "' ignored");
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  return j;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

void read_number(const json& obj, const char* key, double& out, const std::string& where) {
  if (obj.contains(key)) out = number(obj.at(key), where + key);
}

void read_int(const json& obj, const char* key, int& out, const std::string& where) {
  if (obj.contains(key)) out = integer(obj.at(key), where + key);
}

Rational exponent(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number()) return Rational::from_double(j.get<double>());
  } catch (const std::exception& ex) {
    throw ConfigError(where + ": " + ex.what());
  }
  throw ConfigError(where + ": expected a number or a fraction string like \"7/10\"");
}

PolyTerm term_from_json(const json& t, const std::string& where) {
  require_object(t, where);
  PolyTerm p;
  if (!t.contains("coef")) throw ConfigError(where + ": missing 'coef'");
  p.coef = number(t.at("coef"), where + ".coef");
  if (t.contains("powers")) {
    const json& pw = t.at("powers");
    if (!pw.is_array() || pw.size() != 3) throw ConfigError(where + ".powers: expected three integers");
    for (int i = 0; i < 3; ++i) {
      p.powers[i] = integer(pw[i], where + ".powers");
      if (p.powers[i] < 0) throw ConfigError(where + ".powers: negative power");
    }
  }
  return p;
}

Resolution3D resolution_from_json(const json& j, const std::string& where, std::vector<std::string>& warnings) {
  require_object(j, where);
  check_keys(j, {"n1", "n_width", "n_side", "n_thick", "n_rise", "side_grading"}, where + ".", warnings);
  Resolution3D r;
  read_int(j, "n1", r.n1, where + ".");
  read_int(j, "n_width", r.n_width, where + ".");
  read_int(j, "n_side", r.n_side, where + ".");
  read_int(j, "n_thick", r.n_thick, where + ".");
  read_int(j, "n_rise", r.n_rise, where + ".");
  read_number(j, "side_grading", r.side_grading, where + ".");
  if (r.n1 < 1 || r.n_width < 2 || r.n_side < 1 || r.n_thick < 2 || r.n_rise < 1)
    throw ConfigError(where + ": needs n1>=1, n_width>=2, n_side>=1, n_thick>=2, n_rise>=1");
  if (!(r.side_grading >= 1)) throw ConfigError(where + ".side_grading: must be >= 1");
  return r;
}

json resolution_to_json(const Resolution3D& r) {
  return {{"n1", r.n1},           {"n_width", r.n_width}, {"n_side", r.n_side},
          {"n_thick", r.n_thick}, {"n_rise", r.n_rise},   {"side_grading", r.side_grading}};
}

void read_density_triplet(const json& j, std::array<LoadSpec, 3>& out, const std::string& where,
                          std::vector<std::string>& warnings) {
  require_object(j, where);
  check_keys(j, {"b1", "b2", "b3"}, where + ".", warnings);
  const char* keys[3] = {"b1", "b2", "b3"};
  for (int i = 0; i < 3; ++i) {
    if (j.contains(keys[i])) out[i] = load_from_json(j.at(keys[i]), where + "." + keys[i]);
  }
}

}  // namespace

LoadSpec load_from_json(const json& j, const std::string& where) {
  LoadSpec s;
  if (j.is_number()) return LoadSpec::constant(j.get<double>());
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) s.terms.push_back(term_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return s;
  }
  if (!j.is_object()) throw ConfigError(where + ": expected a number, a term list or an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "terms" && it.key() != "value" && it.key() != "x1_window")
      throw ConfigError(where + ": unknown load key '" + it.key() + "'");
  }
  if (j.contains("terms") == j.contains("value")) throw ConfigError(where + ": give exactly one of 'terms' or 'value'");
  if (j.contains("value")) {
    s = LoadSpec::constant(number(j.at("value"), where + ".value"));
  } else {
    s = load_from_json(j.at("terms"), where + ".terms");
  }
  if (j.contains("x1_window")) {
    const json& w = j.at("x1_window");
    if (!w.is_array() || w.size() != 2) throw ConfigError(where + ".x1_window: expected [a, b]");
    double a = number(w[0], where + ".x1_window"), b = number(w[1], where + ".x1_window");
    if (!(a < b)) throw ConfigError(where + ".x1_window: needs a < b");
    s.x1_window = std::make_pair(a, b);
  }
  return s;
}

json load_to_json(const LoadSpec& s) {
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back({{"coef", t.coef}, {"powers", t.powers}});
  json out = {{"terms", terms}};
  if (s.x1_window) out["x1_window"] = {s.x1_window->first, s.x1_window->second};
  return out;
}

ScalingExponents ProblemConfig::exponents() const {
  if (!w || !h) throw ConfigError("exponents: 'w' and 'h' are required for this command");
  try {
    return derive_exponents(*w, *h);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("exponents: ") + ex.what());
  }
}

const IsotropicMaterial& ProblemConfig::require_material() const {
  if (!material) throw ConfigError("material: required for this command");
  return material->resolved;
}

JunctionRule ProblemConfig::rule() const {
  ScalingExponents e = exponents();
  if (!case_aliases) return classify_case(e);
  CaseAliases aliases;
  try {
    aliases = CaseAliases::from_file(case_aliases_resolved);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("case_aliases: ") + ex.what());
  }
  return classify_case(e, &aliases);
}

const Resolution3D& ProblemConfig::resolution(std::size_t i) const {
  return mesh3d_per_eps ? mesh3d.at(i) : mesh3d.front();
}

ProblemConfig parse_config(const json& doc, const std::string& base_dir) {
  ProblemConfig c;
  require_object(doc, "config");
  check_keys(doc,
             {"schema", "geometry", "material", "exponents", "loads", "mesh", "mesh3d", "eps", "solver3d",
              "case_aliases", "output"},
             "", c.warnings);
  if (!doc.contains("schema")) throw ConfigError("schema: missing (expected 1)");
  if (integer(doc.at("schema"), "schema") != 1) throw ConfigError("schema: unsupported version");

  if (doc.contains("geometry")) {
    const json& g = require_object(doc.at("geometry"), "geometry");
    check_keys(g, {"L", "T", "W", "H"}, "geometry.", c.warnings);
    read_number(g, "L", c.geometry.L, "geometry.");
    read_number(g, "T", c.geometry.T, "geometry.");
    read_number(g, "W", c.geometry.W, "geometry.");
    read_number(g, "H", c.geometry.H, "geometry.");
  }
  try {
    validate(c.geometry);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("geometry: ") + ex.what());
  }

  if (doc.contains("material")) {
    const json& m = require_object(doc.at("material"), "material");
    check_keys(m, {"lambda", "mu", "young", "poisson"}, "material.", c.warnings);
    bool lame = m.contains("lambda") || m.contains("mu");
    bool eng = m.contains("young") || m.contains("poisson");
    if (lame == eng) throw ConfigError("material: give exactly one of (lambda, mu) or (young, poisson)");
    MaterialInput in;
    try {
      if (lame) {
        if (!m.contains("lambda") || !m.contains("mu")) throw ConfigError("material: both lambda and mu are needed");
        in.form = MaterialInput::Form::Lame;
        in.a = number(m.at("lambda"), "material.lambda");
        in.b = number(m.at("mu"), "material.mu");
        in.resolved = from_lame(in.a, in.b);
      } else {
        if (!m.contains("young") || !m.contains("poisson"))
          throw ConfigError("material: both young and poisson are needed");
        in.form = MaterialInput::Form::YoungPoisson;
        in.a = number(m.at("young"), "material.young");
        in.b = number(m.at("poisson"), "material.poisson");
        in.resolved = from_young_poisson(in.a, in.b);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("material: ") + ex.what());
    }
    c.material = in;
  }

  if (doc.contains("exponents")) {
    const json& e = require_object(doc.at("exponents"), "exponents");
    check_keys(e, {"w", "h"}, "exponents.", c.warnings);
    if (!e.contains("w") || !e.contains("h")) throw ConfigError("exponents: both 'w' and 'h' are needed");
    c.w = exponent(e.at("w"), "exponents.w");
    c.h = exponent(e.at("h"), "exponents.h");
    c.exponents();  // validates the range
  }

  if (doc.contains("loads")) {
    const json& l = require_object(doc.at("loads"), "loads");
    check_keys(l, {"plate", "beam", "torque"}, "loads.", c.warnings);
    if (l.contains("plate")) read_density_triplet(l.at("plate"), c.loads.plate, "loads.plate", c.warnings);
    if (l.contains("beam")) read_density_triplet(l.at("beam"), c.loads.beam, "loads.beam", c.warnings);
    if (l.contains("torque")) {
      c.loads.torque = load_from_json(l.at("torque"), "loads.torque");
      for (const auto& t : c.loads.torque.terms) {
        if (t.powers[1] || t.powers[2]) throw ConfigError("loads.torque: may depend on x1 only");
      }
    }
  }

  if (doc.contains("mesh")) {
    const json& m = require_object(doc.at("mesh"), "mesh");
    check_keys(m, {"n1", "n2", "torsion_grid"}, "mesh.", c.warnings);
    read_int(m, "n1", c.mesh.n1, "mesh.");
    read_int(m, "n2", c.mesh.n2, "mesh.");
    read_int(m, "torsion_grid", c.mesh.torsion_grid, "mesh.");
  }
  if (c.mesh.n1 < 1) throw ConfigError("mesh.n1: must be at least 1");
  if (c.mesh.n2 < 2 || c.mesh.n2 % 2) throw ConfigError("mesh.n2: must be even and at least 2");
  if (c.mesh.torsion_grid < 8) throw ConfigError("mesh.torsion_grid: must be at least 8");

  if (doc.contains("eps")) {
    const json& e = doc.at("eps");
    if (!e.is_array() || e.empty()) throw ConfigError("eps: expected a nonempty list");
    for (std::size_t i = 0; i < e.size(); ++i) {
      double v = number(e[i], "eps");
      if (!(v > 0 && v <= 1)) throw ConfigError("eps: entries must lie in (0, 1]");
      if (!c.eps.empty() && !(v < c.eps.back())) throw ConfigError("eps: must be strictly decreasing");
      c.eps.push_back(v);
    }
  }

  if (doc.contains("mesh3d")) {
    const json& m = doc.at("mesh3d");
    if (m.is_array()) {
      c.mesh3d.clear();
      for (std::size_t i = 0; i < m.size(); ++i)
        c.mesh3d.push_back(resolution_from_json(m[i], "mesh3d[" + std::to_string(i) + "]", c.warnings));
      c.mesh3d_per_eps = true;
      if (c.mesh3d.size() != c.eps.size())
        throw ConfigError("mesh3d: a list of resolutions needs one entry per eps");
    } else {
      c.mesh3d = {resolution_from_json(m, "mesh3d", c.warnings)};
    }
    if (c.eps.empty()) c.warnings.push_back("mesh3d is only used with eps; ignored");
  }

  if (doc.contains("solver3d")) {
    const json& s = require_object(doc.at("solver3d"), "solver3d");
    check_keys(s, {"element", "rel_tol", "max_iterations", "plate_sample_cells", "stations"}, "solver3d.",
               c.warnings);
    if (s.contains("element")) {
      const json& el = s.at("element");
      if (el == "incompatible") {
        c.solver3d.element = HexElement::Incompatible;
      } else if (el == "trilinear") {
        c.solver3d.element = HexElement::Trilinear;
      } else {
        throw ConfigError("solver3d.element: expected \"incompatible\" or \"trilinear\"");
      }
    }
    read_number(s, "rel_tol", c.solver3d.rel_tol, "solver3d.");
    read_int(s, "max_iterations", c.solver3d.max_iterations, "solver3d.");
    read_int(s, "plate_sample_cells", c.solver3d.plate_sample_cells, "solver3d.");
    read_int(s, "stations", c.solver3d.stations, "solver3d.");
    if (!(c.solver3d.rel_tol > 0 && c.solver3d.rel_tol < 1)) throw ConfigError("solver3d.rel_tol: must lie in (0,1)");
    if (c.solver3d.max_iterations < 1) throw ConfigError("solver3d.max_iterations: must be positive");
    if (c.solver3d.plate_sample_cells < 1 || c.solver3d.stations < 1)
      throw ConfigError("solver3d: sample counts must be positive");
  }

  if (doc.contains("case_aliases")) {
    if (!doc.at("case_aliases").is_string()) throw ConfigError("case_aliases: expected a path");
    c.case_aliases = doc.at("case_aliases").get<std::string>();
    std::filesystem::path p(*c.case_aliases);
    c.case_aliases_resolved = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
    if (!std::filesystem::exists(c.case_aliases_resolved))
      throw ConfigError("case_aliases: file not found: " + c.case_aliases_resolved);
  }
  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) throw ConfigError("output: expected a directory path");
    c.output = doc.at("output").get<std::string>();
  }
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  return parse_config(doc, dir.empty() ? "." : dir.string());
}

json to_json(const ProblemConfig& c) {
  json j;
  j["schema"] = 1;
  j["geometry"] = {{"L", c.geometry.L}, {"T", c.geometry.T}, {"W", c.geometry.W}, {"H", c.geometry.H}};
  if (c.material) {
    if (c.material->form == MaterialInput::Form::Lame) {
      j["material"] = {{"lambda", c.material->a}, {"mu", c.material->b}};
    } else {
      j["material"] = {{"young", c.material->a}, {"poisson", c.material->b}};
    }
  }
  if (c.w && c.h) j["exponents"] = {{"w", c.w->str()}, {"h", c.h->str()}};
  json plate, beam;
  const char* keys[3] = {"b1", "b2", "b3"};
  for (int i = 0; i < 3; ++i) {
    plate[keys[i]] = load_to_json(c.loads.plate[i]);
    beam[keys[i]] = load_to_json(c.loads.beam[i]);
  }
  j["loads"] = {{"plate", plate}, {"beam", beam}, {"torque", load_to_json(c.loads.torque)}};
  j["mesh"] = {{"n1", c.mesh.n1}, {"n2", c.mesh.n2}, {"torsion_grid", c.mesh.torsion_grid}};
  if (!c.eps.empty()) {
    j["eps"] = c.eps;
    if (c.mesh3d_per_eps) {
      json arr = json::array();
      for (const auto& r : c.mesh3d) arr.push_back(resolution_to_json(r));
      j["mesh3d"] = arr;
    } else {
      j["mesh3d"] = resolution_to_json(c.mesh3d.front());
    }
    j["solver3d"] = {{"element", c.solver3d.element == HexElement::Incompatible ? "incompatible" : "trilinear"},
                     {"rel_tol", c.solver3d.rel_tol},
                     {"max_iterations", c.solver3d.max_iterations},
                     {"plate_sample_cells", c.solver3d.plate_sample_cells},
                     {"stations", c.solver3d.stations}};
  }
  if (c.case_aliases) j["case_aliases"] = *c.case_aliases;
  return j;
}

void validate_sweep(const ProblemConfig& c) {
  if (c.eps.empty()) throw ConfigError("eps: required for this command");
  ScalingExponents e = c.exponents();
  c.require_material();
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    try {
      build_mesh(c.geometry, e, c.eps[i], c.resolution(i));
    } catch (const std::exception& ex) {
      throw ConfigError("mesh3d at eps=" + std::to_string(c.eps[i]) + ": " + ex.what());
    }
  }
}

}  // namespace stiffplate
