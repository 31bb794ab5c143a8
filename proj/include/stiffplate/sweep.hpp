#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stiffplate/elasticity3d.hpp"
#include "stiffplate/limit_solver.hpp"

namespace stiffplate {

/// Relative L2 distances between extracted 3D quantities and limit fields.
/// When a limit field is negligible next to all limit fields together, the
/// absolute distance is reported instead.
struct FieldGaps {
  double xi3 = 0, zeta1 = 0, zeta2 = 0;
  double beam_xi1 = 0, beam_xi2 = 0, beam_xi3 = 0, theta = 0;
};

struct SweepEntry {
  double eps = 0;
  Resolution3D res;
  int dofs = 0;
  int cg_iterations = 0;
  double cg_residual = 0;
  double max_aspect = 0;
  double scaled_energy = 0;  // F_eps / eps
  double scaled_W_plate = 0, scaled_W_stiffener = 0;
  double gap = 0;            // |F_eps / eps - F_limit|
  FieldGaps fields;
  double trace_gap = 0;      // combined relative L2 gap of all extracted fields
  double junction_diagnostic = 0;
  std::vector<double> station_x1, theta_scaled, theta_phys, theta_limit;
  std::vector<std::string> warnings;
};

struct SweepReport {
  double limit_energy = 0;
  std::vector<SweepEntry> entries;
  bool complete = false;
  std::string error;
};

struct SweepOptions {
  Solve3DOptions solver;
  int plate_sample_cells = 16;
  int stations = 32;
  /// Called after each completed entry.
  std::function<void(const SweepEntry&)> progress;
};

/// One 3D solve per eps (strictly decreasing), each compared with the
/// limit solution. `res` holds one resolution per eps or a single shared one.
/// An inner failure stops the sweep; the partial report is returned with
/// `complete == false`.
SweepReport sweep(const Geometry& g, const IsotropicMaterial& mat, const ScalingExponents& e, const Loads& loads,
                  const std::vector<double>& eps, const std::vector<Resolution3D>& res, const SolveReport& limit,
                  const SweepOptions& opt = {});

/// Compares one extraction with the limit state.
FieldGaps field_gaps(const Extracted& ex, const LimitState& lim, double& combined);

}  // namespace stiffplate
