#include "stiffplate/sweep.hpp"

#include <cmath>
#include <stdexcept>

namespace stiffplate {

namespace {

struct L2Pair {
  double diff = 0, ref = 0;
  void add(double w, double a, double b) {
    diff += w * (a - b) * (a - b);
    ref += w * b * b;
  }
  // Relative unless the reference is negligible next to `scale`.
  double rel(double scale) const {
    return ref > 1e-18 * scale ? std::sqrt(diff / ref) : std::sqrt(diff);
  }
};

}  // namespace

FieldGaps field_gaps(const Extracted& ex, const LimitState& lim, double& combined) {
  const double T = lim.geom.T;
  L2Pair xi3, z1, z2, b1, b2, b3, th, all;
  for (std::size_t i = 0; i < ex.pw.size(); ++i) {
    const PlatePoint p = lim.plate_at(ex.px1[i], ex.px2[i]);
    const double w = ex.pw[i];
    const double lz1 = p.xi1 - 0.5 * T * p.d1xi3, lz2 = p.xi2 - 0.5 * T * p.d2xi3;
    xi3.add(w, ex.xi3[i], p.xi3);
    z1.add(w, ex.zeta1[i], lz1);
    z2.add(w, ex.zeta2[i], lz2);
    all.add(w, ex.xi3[i], p.xi3);
    all.add(w, ex.zeta1[i], lz1);
    all.add(w, ex.zeta2[i], lz2);
  }
  for (std::size_t i = 0; i < ex.bw.size(); ++i) {
    const BeamPoint b = lim.beam_at(ex.bx1[i]);
    const double w = ex.bw[i];
    b1.add(w, ex.xi1[i], b.xi1);
    b2.add(w, ex.xi2[i], b.xi2);
    b3.add(w, ex.xi3_beam[i], b.xi3);
    th.add(w, ex.theta_scaled[i], b.theta);
    all.add(w, ex.xi1[i], b.xi1);
    all.add(w, ex.xi2[i], b.xi2);
    all.add(w, ex.xi3_beam[i], b.xi3);
    all.add(w, ex.theta_scaled[i], b.theta);
  }
  const double s = all.ref;
  combined = all.rel(0.0);
  return {xi3.rel(s), z1.rel(s), z2.rel(s), b1.rel(s), b2.rel(s), b3.rel(s), th.rel(s)};
}

SweepReport sweep(const Geometry& g, const IsotropicMaterial& mat, const ScalingExponents& e, const Loads& loads,
                  const std::vector<double>& eps, const std::vector<Resolution3D>& res, const SolveReport& limit,
                  const SweepOptions& opt) {
  if (eps.empty()) throw std::invalid_argument("sweep needs at least one eps");
  for (std::size_t i = 1; i < eps.size(); ++i)
    if (!(eps[i] < eps[i - 1])) throw std::invalid_argument("eps list must be strictly decreasing");
  if (res.size() != 1 && res.size() != eps.size())
    throw std::invalid_argument("need one 3D resolution or one per eps");
  SweepReport rep;
  rep.limit_energy = limit.energy;
  try {
    for (std::size_t i = 0; i < eps.size(); ++i) {
      SweepEntry en;
      en.eps = eps[i];
      en.res = res.size() == 1 ? res[0] : res[i];
      const Mesh3D mesh = build_mesh(g, e, en.eps, en.res);
      en.warnings = mesh.warnings;
      en.max_aspect = mesh.max_aspect;
      const Solution3D sol = assemble_and_minimize(mesh, mat, push_forward_loads(loads, g, e, en.eps), opt.solver);
      en.dofs = sol.dofs;
      en.cg_iterations = sol.iterations;
      en.cg_residual = sol.residual;
      en.scaled_energy = sol.energy / en.eps;
      en.scaled_W_plate = sol.W_plate / en.eps;
      en.scaled_W_stiffener = sol.W_stiffener / en.eps;
      en.gap = std::abs(en.scaled_energy - limit.energy);
      const Extracted ex = extract_generalized(mesh, sol.u, opt.plate_sample_cells, opt.stations);
      en.fields = field_gaps(ex, limit.state, en.trace_gap);
      en.junction_diagnostic = ex.junction_diagnostic;
      en.station_x1 = ex.bx1;
      en.theta_scaled = ex.theta_scaled;
      en.theta_phys = ex.theta_phys;
      for (double x : ex.bx1) en.theta_limit.push_back(limit.state.beam_at(x).theta);
      rep.entries.push_back(en);
      if (opt.progress) opt.progress(rep.entries.back());
    }
    rep.complete = true;
  } catch (const std::exception& ex) {
    rep.error = ex.what();
  }
  return rep;
}

}  // namespace stiffplate
