#include "stiffplate/limit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "stiffplate/hermite.hpp"
#include "stiffplate/quadrature.hpp"

namespace stiffplate {

void validate(const Geometry& g) {
  if (!(g.L > 0) || !(g.T > 0) || !(g.W > 0) || !(g.H > 0))
    throw std::domain_error("geometry sizes L, T, W, H must be positive");
  if (!(g.W < g.L)) throw std::domain_error("stiffener half-width W must be smaller than L");
}

PlateMesh make_plate_mesh(double L, int n1, int n2) {
  if (n1 < 1 || n2 < 2) throw std::invalid_argument("plate mesh needs n1 >= 1 and n2 >= 2");
  if (n2 % 2 != 0) throw std::invalid_argument("plate mesh must contain the line x2 = 0 (n2 even)");
  PlateMesh m;
  m.L = L;
  m.n1 = n1;
  m.n2 = n2;
  return m;
}

namespace {

using ElemMat = Eigen::Matrix<double, 24, 24>;
using ElemVec = Eigen::Matrix<double, 24, 1>;
using StrainB = Eigen::Matrix<double, 6, 24>;

constexpr int kCornerI[4] = {0, 1, 1, 0};
constexpr int kCornerJ[4] = {0, 0, 1, 1};

std::array<int, 4> element_nodes(const PlateMesh& m, int e1, int e2) {
  return {m.node(e1, e2), m.node(e1 + 1, e2), m.node(e1 + 1, e2 + 1), m.node(e1, e2 + 1)};
}

// Shape data of one plate element at local (t, s).
struct PlateShape {
  // per local dof (corner*6 + comp): value, x- and y-derivatives, second derivatives
  std::array<double, 24> n{}, dx{}, dy{}, dxx{}, dyy{}, dxy{};
};

PlateShape plate_shape(double t, double s, double h1, double h2) {
  const HermiteValues hx = hermite_cubic(t, h1), hy = hermite_cubic(s, h2);
  const LinearValues lx = lagrange_linear(t, h1), ly = lagrange_linear(s, h2);
  PlateShape p;
  for (int c = 0; c < 4; ++c) {
    const int I = kCornerI[c], J = kCornerJ[c];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const int ia = 2 * I + a, jb = 2 * J + b;
        const int d = c * kPlateDofs + kW + a + 2 * b;
        p.n[d] = hx.n[ia] * hy.n[jb];
        p.dx[d] = hx.d1[ia] * hy.n[jb];
        p.dy[d] = hx.n[ia] * hy.d1[jb];
        p.dxx[d] = hx.d2[ia] * hy.n[jb];
        p.dyy[d] = hx.n[ia] * hy.d2[jb];
        p.dxy[d] = hx.d1[ia] * hy.d1[jb];
      }
    const double q = lx.n[I] * ly.n[J], qx = lx.d1[I] * ly.n[J], qy = lx.n[I] * ly.d1[J];
    for (int comp : {kZ1, kZ2}) {
      const int d = c * kPlateDofs + comp;
      p.n[d] = q;
      p.dx[d] = qx;
      p.dy[d] = qy;
    }
  }
  return p;
}

StrainB plate_strain_matrix(const PlateShape& p, double T) {
  StrainB B = StrainB::Zero();
  for (int c = 0; c < 4; ++c) {
    for (int k = 0; k < 4; ++k) {
      const int d = c * kPlateDofs + k;
      B(0, d) = 0.5 * T * p.dxx[d];
      B(1, d) = 0.5 * T * p.dyy[d];
      B(2, d) = 0.5 * T * p.dxy[d];
      B(3, d) = p.dxx[d];
      B(4, d) = p.dyy[d];
      B(5, d) = p.dxy[d];
    }
    const int z1 = c * kPlateDofs + kZ1, z2 = c * kPlateDofs + kZ2;
    B(0, z1) = p.dx[z1];
    B(1, z2) = p.dy[z2];
    B(2, z1) = 0.5 * p.dy[z1];
    B(2, z2) = 0.5 * p.dx[z2];
  }
  return B;
}

Eigen::Matrix<double, 6, 6> plate_constitutive(const Geometry& g, const IsotropicMaterial& mat) {
  const double nu = mat.poisson;
  Eigen::Matrix3d K;
  K << 1, nu, 0, nu, 1, 0, 0, 0, 2 * (1 - nu);
  const double c = mat.young / (1 - nu * nu);
  Eigen::Matrix<double, 6, 6> D;
  D.topLeftCorner<3, 3>() = c * g.T * K;
  D.topRightCorner<3, 3>() = -c * g.T * g.T / 2 * K;
  D.bottomLeftCorner<3, 3>() = -c * g.T * g.T / 2 * K;
  D.bottomRightCorner<3, 3>() = c * g.T * g.T * g.T / 3 * K;
  return D;
}

struct UnionFind {
  std::vector<int> parent;
  std::vector<char> zero;
  explicit UnionFind(int n) : parent(n), zero(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    zero[a] = zero[a] || zero[b];
  }
  void set_zero(int a) { zero[find(a)] = 1; }
};

// Element containing x in a uniform partition of (-L, L) into n cells,
// together with the local coordinate.
std::pair<int, double> locate(double x, double L, int n) {
  const double h = 2 * L / n;
  int e = static_cast<int>(std::floor((x + L) / h));
  e = std::clamp(e, 0, n - 1);
  return {e, (x + L - e * h) / h};
}

}  // namespace

SparseMatrix assemble_plate_energy(const Geometry& g, const IsotropicMaterial& mat, const PlateMesh& mesh) {
  const DofLayout lay{mesh};
  const double h1 = mesh.h1(), h2 = mesh.h2();
  const auto D = plate_constitutive(g, mat);
  const GaussRule& q = gauss_legendre(4);
  ElemMat Ke = ElemMat::Zero();
  for (std::size_t a = 0; a < q.x.size(); ++a)
    for (std::size_t b = 0; b < q.x.size(); ++b) {
      const PlateShape p = plate_shape(0.5 * (1 + q.x[a]), 0.5 * (1 + q.x[b]), h1, h2);
      const StrainB B = plate_strain_matrix(p, g.T);
      Ke.noalias() += (0.25 * h1 * h2 * q.w[a] * q.w[b]) * B.transpose() * D * B;
    }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.n1) * mesh.n2 * 576);
  for (int e2 = 0; e2 < mesh.n2; ++e2)
    for (int e1 = 0; e1 < mesh.n1; ++e1) {
      const auto nodes = element_nodes(mesh, e1, e2);
      for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
          if (Ke(i, j) == 0) continue;
          trip.emplace_back(lay.plate(nodes[i / 6], i % 6), lay.plate(nodes[j / 6], j % 6), Ke(i, j));
        }
    }
  SparseMatrix K(lay.size(), lay.size());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

BeamStiffness beam_stiffness(const IsotropicMaterial& mat, const CrossSection& xs, Branch branch,
                             const TorsionField* torsion) {
  BeamStiffness b;
  b.EA = mat.young * xs.A;
  b.ES2 = mat.young * xs.S2;
  b.EJ2 = mat.young * xs.J2;
  b.EJ3 = mat.young * xs.J3;
  switch (branch) {
    case Branch::WgtH: b.muJt = mat.mu * xs.Jt_w; break;
    case Branch::HgtW: b.muJt = mat.mu * xs.Jt_h; break;
    case Branch::WeqH:
      if (!torsion) throw std::invalid_argument("w = h requires the torsion function");
      b.muJt = mat.mu * torsion->J_phi;
      break;
  }
  return b;
}

SparseMatrix assemble_beam_energy(const BeamStiffness& bs, const PlateMesh& mesh) {
  const DofLayout lay{mesh};
  const double h = mesh.h1();
  Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
  D(0, 0) = bs.EA;
  D(0, 1) = D(1, 0) = -bs.ES2;
  D(1, 1) = bs.EJ2;
  D(2, 2) = bs.EJ3;
  D(3, 3) = bs.muJt;
  const GaussRule& q = gauss_legendre(4);
  Eigen::Matrix<double, 12, 12> Ke = Eigen::Matrix<double, 12, 12>::Zero();
  for (std::size_t a = 0; a < q.x.size(); ++a) {
    const double t = 0.5 * (1 + q.x[a]);
    const HermiteValues hv = hermite_cubic(t, h);
    const LinearValues lv = lagrange_linear(t, h);
    Eigen::Matrix<double, 4, 12> B = Eigen::Matrix<double, 4, 12>::Zero();
    for (int node = 0; node < 2; ++node) {
      const int o = node * kBeamDofs;
      B(0, o + kB1) = lv.d1[node];
      B(1, o + kB3) = hv.d2[2 * node];
      B(1, o + kB3d) = hv.d2[2 * node + 1];
      B(2, o + kB2) = hv.d2[2 * node];
      B(2, o + kB2d) = hv.d2[2 * node + 1];
      B(3, o + kTheta) = lv.d1[node];
    }
    Ke.noalias() += (0.5 * h * q.w[a]) * B.transpose() * D * B;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (int e = 0; e < mesh.n1; ++e)
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        if (Ke(i, j) == 0) continue;
        trip.emplace_back(lay.beam(e + i / 6, i % 6), lay.beam(e + j / 6, j % 6), Ke(i, j));
      }
  SparseMatrix K(lay.size(), lay.size());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrix ConstraintSet::prolongation() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < reduced_index.size(); ++i)
    if (reduced_index[i] >= 0) trip.emplace_back(static_cast<int>(i), reduced_index[i], 1.0);
  SparseMatrix P(static_cast<int>(reduced_index.size()), reduced_size);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

ConstraintSet apply_junction(const JunctionRule& rule, const PlateMesh& mesh) {
  const DofLayout lay{mesh};
  UnionFind uf(lay.size());
  for (int i2 = 0; i2 <= mesh.n2; ++i2)
    for (int c = 0; c < kPlateDofs; ++c) uf.set_zero(lay.plate(mesh.node(mesh.n1, i2), c));
  for (int c = 0; c < kBeamDofs; ++c) uf.set_zero(lay.beam(mesh.n1, c));

  struct Link {
    std::vector<int> plate_zero;  // plate dofs vanishing when only the plate flag is set
    std::vector<int> beam_zero;   // beam dofs vanishing when only the beam flag is set
    std::vector<std::pair<int, int>> tie;  // (plate, beam) pairs identified when both are set
  };
  const int row = mesh.junction_row();
  for (int i1 = 0; i1 <= mesh.n1; ++i1) {
    const int nd = mesh.node(i1, row);
    auto P = [&](int c) { return lay.plate(nd, c); };
    auto Bm = [&](int c) { return lay.beam(i1, c); };
    const Link links[4] = {
        {{P(kZ1)}, {Bm(kB1)}, {{P(kZ1), Bm(kB1)}}},
        {{P(kZ2)}, {Bm(kB2), Bm(kB2d)}, {{P(kZ2), Bm(kB2)}}},
        {{P(kW), P(kWx)}, {Bm(kB3), Bm(kB3d)}, {{P(kW), Bm(kB3)}, {P(kWx), Bm(kB3d)}}},
        {{P(kWy), P(kWxy)}, {Bm(kTheta)}, {{P(kWy), Bm(kTheta)}}},
    };
    for (int i = 0; i < 4; ++i) {
      const bool hat = rule.rho_hat[i] != 0, check = rule.rho_check[i] != 0;
      if (hat && check) {
        for (auto [a, b] : links[i].tie) uf.unite(a, b);
      } else if (hat) {
        for (int d : links[i].plate_zero) uf.set_zero(d);
      } else if (check) {
        for (int d : links[i].beam_zero) uf.set_zero(d);
      } else {
        throw std::logic_error("junction flags both zero");
      }
    }
  }
  ConstraintSet cs;
  cs.reduced_index.assign(lay.size(), -1);
  std::vector<int> root_index(lay.size(), -1);
  for (int d = 0; d < lay.size(); ++d) {
    const int r = uf.find(d);
    if (uf.zero[r]) continue;
    if (root_index[r] < 0) root_index[r] = cs.reduced_size++;
    cs.reduced_index[d] = root_index[r];
  }
  return cs;
}

Eigen::VectorXd assemble_loads(const Loads& loads, const Geometry& g, const PlateMesh& mesh) {
  const DofLayout lay{mesh};
  Eigen::VectorXd f = Eigen::VectorXd::Zero(lay.size());
  const double h1 = mesh.h1(), h2 = mesh.h2();

  // Plate: u_a = z_a + (T/2 - x3) d_a w, u3 = w, integrated over (0, T).
  for (int comp = 0; comp < 3; ++comp) {
    const LoadSpec& b = loads.plate[comp];
    if (b.is_zero()) continue;
    const GaussRule& q = gauss_legendre(b.degree() / 2 + 4);
    for (int e1 = 0; e1 < mesh.n1; ++e1) {
      const double xa = mesh.x1(e1);
      const auto [ca, cb] = b.clip(xa, xa + h1);
      if (!(cb > ca)) continue;
      for (int e2 = 0; e2 < mesh.n2; ++e2) {
        const double ya = mesh.x2(e2);
        const auto nodes = element_nodes(mesh, e1, e2);
        ElemVec fe = ElemVec::Zero();
        for (std::size_t a = 0; a < q.x.size(); ++a)
          for (std::size_t bq = 0; bq < q.x.size(); ++bq) {
            const double x1 = ca + 0.5 * (1 + q.x[a]) * (cb - ca);
            const double x2 = ya + 0.5 * (1 + q.x[bq]) * h2;
            const double wxy = 0.25 * (cb - ca) * h2 * q.w[a] * q.w[bq];
            const PlateShape p = plate_shape((x1 - xa) / h1, (x2 - ya) / h2, h1, h2);
            double m0 = 0, m1 = 0;  // int b and int b (T/2 - x3) over the thickness
            for (std::size_t c = 0; c < q.x.size(); ++c) {
              const double x3 = 0.5 * (1 + q.x[c]) * g.T;
              const double bv = b(x1, x2, x3) * 0.5 * g.T * q.w[c];
              m0 += bv;
              m1 += bv * (0.5 * g.T - x3);
            }
            for (int cn = 0; cn < 4; ++cn) {
              const int o = cn * kPlateDofs;
              if (comp == 2) {
                for (int k = 0; k < 4; ++k) fe[o + k] += wxy * m0 * p.n[o + k];
              } else {
                const int z = o + (comp == 0 ? kZ1 : kZ2);
                fe[z] += wxy * m0 * p.n[z];
                for (int k = 0; k < 4; ++k) fe[o + k] += wxy * m1 * (comp == 0 ? p.dx[o + k] : p.dy[o + k]);
              }
            }
          }
        for (int i = 0; i < 24; ++i) f[lay.plate(nodes[i / 6], i % 6)] += fe[i];
      }
    }
  }

  // Beam: u1 = xi1 - x2 xi2' - x3 xi3', u_a = xi_a, plus the torque on theta.
  for (int comp = 0; comp < 4; ++comp) {
    const LoadSpec& b = comp < 3 ? loads.beam[comp] : loads.torque;
    if (b.is_zero()) continue;
    const GaussRule& q = gauss_legendre(b.degree() / 2 + 4);
    for (int e = 0; e < mesh.n1; ++e) {
      const double xa = mesh.x1(e);
      const auto [ca, cb] = b.clip(xa, xa + h1);
      if (!(cb > ca)) continue;
      for (std::size_t a = 0; a < q.x.size(); ++a) {
        const double x1 = ca + 0.5 * (1 + q.x[a]) * (cb - ca);
        const double wx = 0.5 * (cb - ca) * q.w[a];
        const double t = (x1 - xa) / h1;
        const HermiteValues hv = hermite_cubic(t, h1);
        const LinearValues lv = lagrange_linear(t, h1);
        if (comp == 3) {
          const double m = b(x1, 0, 0);
          for (int nd = 0; nd < 2; ++nd) f[lay.beam(e + nd, kTheta)] += wx * m * lv.n[nd];
          continue;
        }
        double m0 = 0, m2 = 0, m3 = 0;  // section integrals of b, x2 b, x3 b
        for (std::size_t i = 0; i < q.x.size(); ++i)
          for (std::size_t j = 0; j < q.x.size(); ++j) {
            const double x2 = g.W * q.x[i];
            const double x3 = 0.5 * (1 + q.x[j]) * g.H;
            const double bv = b(x1, x2, x3) * g.W * 0.5 * g.H * q.w[i] * q.w[j];
            m0 += bv;
            m2 += bv * x2;
            m3 += bv * x3;
          }
        for (int nd = 0; nd < 2; ++nd) {
          if (comp == 0) {
            f[lay.beam(e + nd, kB1)] += wx * m0 * lv.n[nd];
            f[lay.beam(e + nd, kB2)] -= wx * m2 * hv.d1[2 * nd];
            f[lay.beam(e + nd, kB2d)] -= wx * m2 * hv.d1[2 * nd + 1];
            f[lay.beam(e + nd, kB3)] -= wx * m3 * hv.d1[2 * nd];
            f[lay.beam(e + nd, kB3d)] -= wx * m3 * hv.d1[2 * nd + 1];
          } else {
            const int v = comp == 1 ? kB2 : kB3;
            f[lay.beam(e + nd, v)] += wx * m0 * hv.n[2 * nd];
            f[lay.beam(e + nd, v + 1)] += wx * m0 * hv.n[2 * nd + 1];
          }
        }
      }
    }
  }
  return f;
}

PlatePoint LimitState::plate_at(double x1, double x2) const {
  const DofLayout lay{mesh};
  const auto [e1, t] = locate(x1, mesh.L, mesh.n1);
  const auto [e2, s] = locate(x2, mesh.L, mesh.n2);
  const PlateShape p = plate_shape(t, s, mesh.h1(), mesh.h2());
  const auto nodes = element_nodes(mesh, e1, e2);
  PlatePoint r;
  double z1 = 0, z2 = 0;
  for (int i = 0; i < 24; ++i) {
    const double v = u[lay.plate(nodes[i / 6], i % 6)];
    const int comp = i % 6;
    if (comp == kZ1) {
      z1 += v * p.n[i];
    } else if (comp == kZ2) {
      z2 += v * p.n[i];
    } else {
      r.xi3 += v * p.n[i];
      r.d1xi3 += v * p.dx[i];
      r.d2xi3 += v * p.dy[i];
    }
  }
  r.xi1 = z1 + 0.5 * geom.T * r.d1xi3;
  r.xi2 = z2 + 0.5 * geom.T * r.d2xi3;
  return r;
}

BeamPoint LimitState::beam_at(double x1) const {
  const DofLayout lay{mesh};
  const auto [e, t] = locate(x1, mesh.L, mesh.n1);
  const HermiteValues hv = hermite_cubic(t, mesh.h1());
  const LinearValues lv = lagrange_linear(t, mesh.h1());
  BeamPoint r;
  for (int nd = 0; nd < 2; ++nd) {
    auto U = [&](int c) { return u[lay.beam(e + nd, c)]; };
    r.xi1 += U(kB1) * lv.n[nd];
    r.theta += U(kTheta) * lv.n[nd];
    r.xi2 += U(kB2) * hv.n[2 * nd] + U(kB2d) * hv.n[2 * nd + 1];
    r.d1xi2 += U(kB2) * hv.d1[2 * nd] + U(kB2d) * hv.d1[2 * nd + 1];
    r.xi3 += U(kB3) * hv.n[2 * nd] + U(kB3d) * hv.n[2 * nd + 1];
    r.d1xi3 += U(kB3) * hv.d1[2 * nd] + U(kB3d) * hv.d1[2 * nd + 1];
  }
  return r;
}

double junction_residual(const LimitState& s, const JunctionRule& rule) {
  const PlateMesh& m = s.mesh;
  const double T = s.geom.T;
  double res = 0;
  for (int i1 = 0; i1 <= m.n1; ++i1) {
    const double x1 = m.x1(i1);
    const PlatePoint p = s.plate_at(x1, 0.0);
    const BeamPoint b = s.beam_at(x1);
    const double lhs[4] = {p.xi1 - 0.5 * T * p.d1xi3, p.xi2 - 0.5 * T * p.d2xi3, p.xi3, p.d2xi3};
    const double rhs[4] = {b.xi1, b.xi2, b.xi3, b.theta};
    for (int i = 0; i < 4; ++i)
      res = std::max(res, std::abs(rule.rho_hat[i] * lhs[i] - rule.rho_check[i] * rhs[i]));
  }
  for (int i2 = 0; i2 <= m.n2; ++i2) {
    const PlatePoint p = s.plate_at(m.L, m.x2(i2));
    for (double v : {p.xi1, p.xi2, p.xi3, p.d1xi3}) res = std::max(res, std::abs(v));
  }
  const BeamPoint b = s.beam_at(m.L);
  for (double v : {b.xi1, b.xi2, b.xi3, b.d1xi2, b.d1xi3, b.theta}) res = std::max(res, std::abs(v));
  return res;
}

double evaluate_energy(const SparseMatrix& K, const Eigen::VectorXd& f, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(K * u) - f.dot(u);
}

SolveReport solve(const Geometry& g, const IsotropicMaterial& mat, const JunctionRule& rule, const Loads& loads,
                  const LimitMeshSpec& spec, const TorsionField* torsion) {
  validate(g);
  const PlateMesh mesh = make_plate_mesh(g.L, spec.n1, spec.n2);
  const CrossSection xs = constants(g.W, g.H);
  std::optional<TorsionField> own_torsion;
  if (rule.branch == Branch::WeqH && !torsion) {
    own_torsion = solve_torsion(g.W, g.H, spec.torsion_grid);
    torsion = &*own_torsion;
  }
  SolveReport rep;
  rep.rule = rule;
  rep.beam = beam_stiffness(mat, xs, rule.branch, torsion);
  const SparseMatrix Kp = assemble_plate_energy(g, mat, mesh);
  const SparseMatrix Kb = assemble_beam_energy(rep.beam, mesh);
  const SparseMatrix K = Kp + Kb;
  const Eigen::VectorXd f = assemble_loads(loads, g, mesh);
  const ConstraintSet cs = apply_junction(rule, mesh);
  const SparseMatrix P = cs.prolongation();
  const SparseMatrix Kr = P.transpose() * K * P;
  const Eigen::VectorXd fr = P.transpose() * f;

  Eigen::SimplicialLLT<SparseMatrix> llt(Kr);
  if (llt.info() != Eigen::Success) throw std::runtime_error("indefinite assembled system in limit solve");
  const Eigen::VectorXd ur = llt.solve(fr);
  if (llt.info() != Eigen::Success) throw std::runtime_error("limit solve failed");

  rep.state.geom = g;
  rep.state.mesh = mesh;
  rep.state.u = P * ur;
  const Eigen::VectorXd& u = rep.state.u;
  rep.reduced_dofs = cs.reduced_size;
  const double fn = fr.norm();
  rep.solver_residual = fn > 0 ? (Kr * ur - fr).norm() / fn : (Kr * ur).norm();
  rep.W_plate = 0.5 * u.dot(Kp * u);
  rep.W_beam = 0.5 * u.dot(Kb * u);
  rep.work = f.dot(u);
  rep.energy = rep.W_plate + rep.W_beam - rep.work;
  rep.energy_check = -0.5 * rep.work;
  rep.constraint_residual = junction_residual(rep.state, rule);
  rep.status = rule.proved ? "proved Gamma-limit" : "conjectured Gamma-limit";
  return rep;
}

}  // namespace stiffplate
