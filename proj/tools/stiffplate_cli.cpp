// Command-line front end: classify, torsion, solve-limit, solve-3d, sweep.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "stiffplate/config.hpp"
#include "stiffplate/cross_section.hpp"
#include "stiffplate/csv.hpp"
#include "stiffplate/elasticity3d.hpp"
#include "stiffplate/limit_solver.hpp"
#include "stiffplate/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stiffplate;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Invocation {
  std::string config;
  std::string out;
  int threads = 0;
  bool deterministic = false;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

json int_array(const std::array<int, 4>& a) { return json(std::vector<int>(a.begin(), a.end())); }

std::string letter(const JunctionRule& r) { return r.case_letter.value_or("unassigned"); }

json rule_json(const JunctionRule& r, const ScalingExponents& e) {
  std::string desc = describe_case(r);
  std::vector<std::string> conditions;
  std::size_t pos = desc.find('\n');
  std::string summary = desc.substr(0, pos);
  while (pos != std::string::npos) {
    std::size_t next = desc.find('\n', pos + 1);
    std::string line = desc.substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
    conditions.push_back(line.substr(line.find_first_not_of(' ')));
    pos = next;
  }
  json j;
  j["w"] = e.w_exact ? e.w_exact->str() : format_number(e.w);
  j["h"] = e.h_exact ? e.h_exact->str() : format_number(e.h);
  j["k"] = e.k;
  j["M"] = e.M;
  j["m"] = e.m;
  j["sign_vector"] = format_sign_vector(r.sign_vector);
  j["rho_hat"] = int_array(r.rho_hat);
  j["rho_check"] = int_array(r.rho_check);
  j["branch"] = to_string(r.branch);
  j["case"] = letter(r);
  j["proved"] = r.proved;
  j["summary"] = summary;
  j["conditions"] = conditions;
  return j;
}

json limit_json(const SolveReport& r) {
  json j;
  j["status"] = r.status;
  j["case"] = letter(r.rule);
  j["branch"] = to_string(r.rule.branch);
  j["energy"] = r.energy;
  j["energy_check"] = r.energy_check;
  j["W_plate"] = r.W_plate;
  j["W_beam"] = r.W_beam;
  j["work"] = r.work;
  j["constraint_residual"] = r.constraint_residual;
  j["solver_residual"] = r.solver_residual;
  j["reduced_dofs"] = r.reduced_dofs;
  j["beam_stiffness"] = {{"EA", r.beam.EA}, {"ES2", r.beam.ES2}, {"EJ2", r.beam.EJ2}, {"EJ3", r.beam.EJ3},
                         {"muJt", r.beam.muJt}};
  j["mesh"] = {{"n1", r.state.mesh.n1}, {"n2", r.state.mesh.n2}};
  return j;
}

void write_limit_fields(const SolveReport& r, const fs::path& dir) {
  const PlateMesh& m = r.state.mesh;
  CsvWriter p1((dir / "plate_xi1.csv").string(), {"x1", "x2", "value"});
  CsvWriter p2((dir / "plate_xi2.csv").string(), {"x1", "x2", "value"});
  CsvWriter p3((dir / "plate_xi3.csv").string(), {"x1", "x2", "value"});
  for (int i2 = 0; i2 <= m.n2; ++i2) {
    for (int i1 = 0; i1 <= m.n1; ++i1) {
      PlatePoint p = r.state.plate_at(m.x1(i1), m.x2(i2));
      p1.row({m.x1(i1), m.x2(i2), p.xi1});
      p2.row({m.x1(i1), m.x2(i2), p.xi2});
      p3.row({m.x1(i1), m.x2(i2), p.xi3});
    }
  }
  CsvWriter b1((dir / "beam_xi1.csv").string(), {"x1", "value"});
  CsvWriter b2((dir / "beam_xi2.csv").string(), {"x1", "value"});
  CsvWriter b3((dir / "beam_xi3.csv").string(), {"x1", "value"});
  CsvWriter bt((dir / "beam_theta.csv").string(), {"x1", "value"});
  for (int i1 = 0; i1 <= m.n1; ++i1) {
    BeamPoint b = r.state.beam_at(m.x1(i1));
    b1.row({m.x1(i1), b.xi1});
    b2.row({m.x1(i1), b.xi2});
    b3.row({m.x1(i1), b.xi3});
    bt.row({m.x1(i1), b.theta});
  }
}

Solve3DOptions solver_options(const ProblemConfig& c, const Invocation& inv) {
  Solve3DOptions o;
  o.element = c.solver3d.element;
  o.rel_tol = c.solver3d.rel_tol;
  o.max_iterations = c.solver3d.max_iterations;
  o.threads = inv.threads;
  o.ordered = inv.deterministic;
  return o;
}

SolveReport run_limit(const ProblemConfig& c, const fs::path& dir) {
  SolveReport r = solve(c.geometry, c.require_material(), c.rule(), c.loads, c.mesh);
  write_json(dir / "limit_report.json", limit_json(r));
  write_limit_fields(r, dir);
  return r;
}

int cmd_classify(const ProblemConfig& c, const fs::path& dir) {
  ScalingExponents e = c.exponents();
  JunctionRule r = c.rule();
  std::string desc = describe_case(r);
  std::cout << "case " << letter(r) << "; " << desc << "\n";
  std::cout << "sign vector (" << format_sign_vector(r.sign_vector) << "), branch " << to_string(r.branch)
            << ", " << (r.proved ? "proved" : "conjectured") << " limit\n";
  json j = rule_json(r, e);
  std::cout << "rho_hat " << j["rho_hat"].dump() << ", rho_check " << j["rho_check"].dump() << "\n";
  write_json(dir / "classify.json", j);
  return 0;
}

int cmd_torsion(const ProblemConfig& c, const fs::path& dir) {
  const Geometry& g = c.geometry;
  CrossSection xs = constants(g.W, g.H);
  TorsionField t = solve_torsion(g.W, g.H, c.mesh.torsion_grid);
  t.write_csv((dir / "torsion.csv").string());
  json j = {{"W", g.W},           {"H", g.H},          {"grid", c.mesh.torsion_grid},
            {"J_phi", t.J_phi},   {"Jt_w", xs.Jt_w},   {"Jt_h", xs.Jt_h},
            {"iterations", t.iterations}, {"residual", t.residual}};
  write_json(dir / "torsion.json", j);
  std::cout << "J_phi = " << format_number(t.J_phi) << "\n"
            << "Jt_w = " << format_number(xs.Jt_w) << "\n"
            << "Jt_h = " << format_number(xs.Jt_h) << "\n";
  return 0;
}

int cmd_solve_limit(const ProblemConfig& c, const fs::path& dir) {
  c.require_material();
  c.rule();
  SolveReport r;
  try {
    r = run_limit(c, dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    std::cerr << "limit solve failed: " << ex.what() << "\n";
    return kExitSolver;
  }
  std::cout << "case " << letter(r.rule) << " (" << r.status << ")\n"
            << "energy = " << format_number(r.energy) << "\n"
            << "constraint residual = " << format_number(r.constraint_residual) << "\n";
  return 0;
}

json entry_json(const SweepEntry& s) {
  json j;
  j["eps"] = s.eps;
  j["resolution"] = {{"n1", s.res.n1},           {"n_width", s.res.n_width}, {"n_side", s.res.n_side},
                     {"n_thick", s.res.n_thick}, {"n_rise", s.res.n_rise},   {"side_grading", s.res.side_grading}};
  j["dofs"] = s.dofs;
  j["cg_iterations"] = s.cg_iterations;
  j["cg_residual"] = s.cg_residual;
  j["max_aspect"] = s.max_aspect;
  j["scaled_energy"] = s.scaled_energy;
  j["scaled_W_plate"] = s.scaled_W_plate;
  j["scaled_W_stiffener"] = s.scaled_W_stiffener;
  j["gap"] = s.gap;
  j["trace_gap"] = s.trace_gap;
  j["junction_diagnostic"] = s.junction_diagnostic;
  j["field_gaps"] = {{"xi3", s.fields.xi3},           {"zeta1", s.fields.zeta1},
                     {"zeta2", s.fields.zeta2},       {"beam_xi1", s.fields.beam_xi1},
                     {"beam_xi2", s.fields.beam_xi2}, {"beam_xi3", s.fields.beam_xi3},
                     {"theta", s.fields.theta}};
  j["warnings"] = s.warnings;
  return j;
}

int cmd_solve_3d(const ProblemConfig& c, const Invocation& inv, const fs::path& dir) {
  validate_sweep(c);
  ScalingExponents e = c.exponents();
  const IsotropicMaterial& mat = c.require_material();
  json entries = json::array();
  int status = 0;
  for (std::size_t i = 0; i < c.eps.size(); ++i) {
    double eps = c.eps[i];
    try {
      Mesh3D mesh = build_mesh(c.geometry, e, eps, c.resolution(i));
      BodyForce f = push_forward_loads(c.loads, c.geometry, e, eps);
      Solution3D s = assemble_and_minimize(mesh, mat, f, solver_options(c, inv));
      Extracted ex = extract_generalized(mesh, s.u, c.solver3d.plate_sample_cells, c.solver3d.stations);
      json j = {{"eps", eps},
                {"dofs", s.dofs},
                {"cg_iterations", s.iterations},
                {"cg_residual", s.residual},
                {"energy", s.energy},
                {"scaled_energy", s.energy / eps},
                {"W_plate", s.W_plate},
                {"W_stiffener", s.W_stiffener},
                {"max_aspect", mesh.max_aspect},
                {"junction_diagnostic", ex.junction_diagnostic},
                {"warnings", mesh.warnings}};
      entries.push_back(j);
      std::string tag = "eps" + std::to_string(i);
      CsvWriter snap((dir / ("displacement_" + tag + ".csv")).string(), {"x1", "x2", "x3", "u1", "u2", "u3"});
      for (std::size_t k = 0; k < mesh.x3.size(); ++k)
        for (std::size_t jj = 0; jj < mesh.x2.size(); ++jj)
          for (std::size_t ii = 0; ii < mesh.x1.size(); ++ii) {
            int id = mesh.node_id[mesh.grid_node(int(ii), int(jj), int(k))];
            if (id < 0) continue;
            snap.row({mesh.x1[ii], mesh.x2[jj], mesh.x3[k], s.u[3 * id], s.u[3 * id + 1], s.u[3 * id + 2]});
          }
      CsvWriter beam((dir / ("stiffener_" + tag + ".csv")).string(),
                     {"x1", "xi1", "xi2", "xi3", "theta_scaled", "theta_phys"});
      for (std::size_t k = 0; k < ex.bx1.size(); ++k)
        beam.row({ex.bx1[k], ex.xi1[k], ex.xi2[k], ex.xi3_beam[k], ex.theta_scaled[k], ex.theta_phys[k]});
      std::cout << "eps = " << format_number(eps) << ": scaled energy " << format_number(s.energy / eps) << ", "
                << s.dofs << " dofs, " << s.iterations << " CG iterations\n";
    } catch (const std::exception& ex) {
      std::cerr << "3D solve failed at eps = " << eps << ": " << ex.what() << "\n";
      status = kExitSolver;
      break;
    }
  }
  write_json(dir / "solve3d_report.json", {{"entries", entries}, {"complete", status == 0}});
  return status;
}

int cmd_sweep(const ProblemConfig& c, const Invocation& inv, const fs::path& dir) {
  validate_sweep(c);
  ScalingExponents e = c.exponents();
  SolveReport lim;
  try {
    lim = run_limit(c, dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    std::cerr << "limit solve failed: " << ex.what() << "\n";
    return kExitSolver;
  }
  std::cout << "limit energy " << format_number(lim.energy) << " (case " << letter(lim.rule) << ", " << lim.status
            << ")\n";

  SweepOptions opt;
  opt.solver = solver_options(c, inv);
  opt.plate_sample_cells = c.solver3d.plate_sample_cells;
  opt.stations = c.solver3d.stations;
  opt.progress = [](const SweepEntry& s) {
    std::cout << "eps = " << format_number(s.eps) << ": scaled energy " << format_number(s.scaled_energy)
              << ", gap " << format_number(s.gap) << ", junction diagnostic "
              << format_number(s.junction_diagnostic) << std::endl;
  };
  std::vector<Resolution3D> res = c.mesh3d_per_eps ? c.mesh3d : std::vector<Resolution3D>{c.mesh3d.front()};
  SweepReport rep = sweep(c.geometry, c.require_material(), e, c.loads, c.eps, res, lim, opt);

  CsvWriter table((dir / "sweep.csv").string(), {"eps", "scaled_energy", "gap", "trace_gap"});
  CsvWriter theta((dir / "sweep_theta.csv").string(), {"eps", "x1", "theta_scaled", "theta_phys", "theta_limit"});
  json entries = json::array();
  for (const SweepEntry& s : rep.entries) {
    table.row({s.eps, s.scaled_energy, s.gap, s.trace_gap});
    for (std::size_t k = 0; k < s.station_x1.size(); ++k)
      theta.row({s.eps, s.station_x1[k], s.theta_scaled[k], s.theta_phys[k], s.theta_limit[k]});
    entries.push_back(entry_json(s));
  }
  json j = {{"limit_energy", rep.limit_energy}, {"complete", rep.complete}, {"entries", entries}};
  if (!rep.complete) j["error"] = rep.error;
  write_json(dir / "sweep_report.json", j);
  if (!rep.complete) {
    std::cerr << "sweep stopped: " << rep.error << "\n";
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stiffened plate: regime classification, limit solves and 3D comparison sweeps"};
  app.require_subcommand(1);
  Invocation inv;
  inv.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const char* names[] = {"classify", "torsion", "solve-limit", "solve-3d", "sweep"};
  const char* help[] = {"Report the junction regime for the configured exponents",
                        "Solve for the torsion function of the stiffener section",
                        "Solve the reduced plate-beam problem",
                        "Solve the 3D elasticity problem for each configured eps",
                        "Limit solve followed by the 3D eps sweep"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", inv.config, "Problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", inv.out, "Output directory");
    sub->add_option("--threads", inv.threads, "Worker threads for 3D assembly")->check(CLI::PositiveNumber);
    sub->add_flag("--deterministic", inv.deterministic, "Fixed reduction order for reproducible output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    int code = app.exit(ex);
    return code == 0 ? 0 : kExitConfig;
  }
  std::string command = app.get_subcommands().front()->get_name();

  ProblemConfig cfg;
  fs::path dir;
  try {
    cfg = load_config(inv.config);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    dir = !inv.out.empty() ? fs::path(inv.out) : fs::path(cfg.output.value_or("out"));
    fs::create_directories(dir);
    json run = {{"command", command},
                {"threads", inv.threads},
                {"deterministic", inv.deterministic},
                {"config", to_json(cfg)},
                {"warnings", cfg.warnings}};
    write_json(dir / "run.json", run);

    if (command == "classify") return cmd_classify(cfg, dir);
    if (command == "torsion") return cmd_torsion(cfg, dir);
    if (command == "solve-limit") return cmd_solve_limit(cfg, dir);
    if (command == "solve-3d") return cmd_solve_3d(cfg, inv, dir);
    return cmd_sweep(cfg, inv, dir);
  } catch (const ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitSolver;
  }
}
