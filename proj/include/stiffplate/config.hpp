#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stiffplate/elasticity3d.hpp"
#include "stiffplate/limit_solver.hpp"
#include "stiffplate/mesh3d.hpp"
#include "stiffplate/rational.hpp"
#include "stiffplate/regime.hpp"

namespace stiffplate {

/// Invalid or inconsistent problem configuration. `what()` names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaterialInput {
  enum class Form { Lame, YoungPoisson } form = Form::Lame;
  double a = 0, b = 0;  // (lambda, mu) or (E, nu) as given
  IsotropicMaterial resolved;
};

struct Sweep3DSettings {
  HexElement element = HexElement::Incompatible;
  double rel_tol = 1e-9;
  int max_iterations = 50000;
  int plate_sample_cells = 16;
  int stations = 32;
};

/// Fully resolved problem description. Sections absent from the input keep
/// their defaults, except material and exponents which stay empty until
/// given.
struct ProblemConfig {
  Geometry geometry;
  std::optional<MaterialInput> material;
  std::optional<Rational> w, h;
  Loads loads;
  LimitMeshSpec mesh;
  std::vector<Resolution3D> mesh3d{Resolution3D{}};
  bool mesh3d_per_eps = false;
  std::vector<double> eps;
  Sweep3DSettings solver3d;
  std::optional<std::string> case_aliases;  // path as given
  std::string case_aliases_resolved;         // relative to the config file
  std::optional<std::string> output;
  std::vector<std::string> warnings;

  ScalingExponents exponents() const;
  const IsotropicMaterial& require_material() const;
  /// Junction rule for the configured exponents, using the alias file if set.
  JunctionRule rule() const;
  /// Resolution used for the i-th eps entry.
  const Resolution3D& resolution(std::size_t i) const;
};

/// Parses and validates a configuration document. `base_dir` anchors
/// relative paths inside it.
ProblemConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ProblemConfig load_config(const std::string& path);

/// Echo of the resolved configuration (defaults filled in, exponents as
/// exact fractions). Feeding it back to parse_config reproduces the run.
nlohmann::json to_json(const ProblemConfig& cfg);

/// Checks the mesh preconditions of every sweep entry without solving.
void validate_sweep(const ProblemConfig& cfg);

nlohmann::json load_to_json(const LoadSpec& s);
LoadSpec load_from_json(const nlohmann::json& j, const std::string& where);

}  // namespace stiffplate
