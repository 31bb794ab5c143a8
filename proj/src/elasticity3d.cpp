#include "stiffplate/elasticity3d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include "stiffplate/cross_section.hpp"
#include "stiffplate/quadrature.hpp"

namespace stiffplate {

namespace {

using Voigt = Eigen::Matrix<double, 6, 6>;

Voigt voigt_elasticity(const IsotropicMaterial& mat) {
  Voigt D = Voigt::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) D(i, j) = mat.lambda;
    D(i, i) += 2 * mat.mu;
    D(i + 3, i + 3) = mat.mu;
  }
  return D;
}

// Engineering strain rows (xx, yy, zz, yz, xz, xy) of a scalar shape function
// with gradient g acting on displacement component `comp`.
template <class Mat>
void add_strain_columns(Mat& B, int col, int comp, const Eigen::Vector3d& g) {
  B(comp, col) += g[comp];
  switch (comp) {
    case 0: B(5, col) += g[1]; B(4, col) += g[2]; break;
    case 1: B(5, col) += g[0]; B(3, col) += g[2]; break;
    default: B(3, col) += g[1]; B(4, col) += g[0]; break;
  }
}

struct CellDims {
  double a, b, c;
  HexElement type;
  bool operator<(const CellDims& o) const {
    return std::tie(a, b, c, type) < std::tie(o.a, o.b, o.c, o.type);
  }
};

// Element cache keyed by box size; one cache per assembly call.
class ElementCache {
 public:
  ElementCache(const IsotropicMaterial& mat, HexElement type) : mat_(mat), type_(type) {}
  const HexMatrix& get(double a, double b, double c) {
    std::lock_guard<std::mutex> lock(mtx_);
    const CellDims key{a, b, c, type_};
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, hex_stiffness(mat_, a, b, c, type_)).first;
    return it->second;
  }

 private:
  IsotropicMaterial mat_;
  HexElement type_;
  std::mutex mtx_;
  std::map<CellDims, HexMatrix> cache_;
};

std::array<double, 3> cell_size(const Mesh3D& m, int i, int j, int k) {
  return {m.x1[i + 1] - m.x1[i], m.x2[j + 1] - m.x2[j], m.x3[k + 1] - m.x3[k]};
}

struct CellIndex {
  int i, j, k;
};

std::vector<CellIndex> active_cells(const Mesh3D& m) {
  std::vector<CellIndex> cells;
  for (int k = 0; k < m.c3(); ++k)
    for (int j = 0; j < m.c2(); ++j)
      for (int i = 0; i < m.c1(); ++i)
        if (m.tag(i, j, k) != CellTag::Void) cells.push_back({i, j, k});
  return cells;
}

// Runs body(begin, end, out) over chunks of [0, n) and concatenates the
// per-chunk outputs; in ordered mode the concatenation follows chunk order.
template <class T, class Body>
std::vector<T> parallel_collect(std::size_t n, int threads, bool ordered, Body body) {
  const std::size_t chunk = 256;
  const std::size_t nchunks = (n + chunk - 1) / chunk;
  std::vector<std::vector<T>> parts(nchunks);
  std::vector<std::size_t> finish_order;
  finish_order.reserve(nchunks);
  std::mutex mtx;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c; (c = next.fetch_add(1)) < nchunks;) {
      body(c * chunk, std::min(n, (c + 1) * chunk), parts[c]);
      std::lock_guard<std::mutex> lock(mtx);
      finish_order.push_back(c);
    }
  };
  const int nt = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (ordered) std::sort(finish_order.begin(), finish_order.end());
  std::vector<T> out;
  for (std::size_t c : finish_order) out.insert(out.end(), parts[c].begin(), parts[c].end());
  return out;
}

std::vector<int> clamp_map(const Mesh3D& m, int& free_count) {
  std::vector<int> map(3 * static_cast<std::size_t>(m.num_nodes), 0);
  const int i = m.c1();
  for (int k = 0; k < static_cast<int>(m.x3.size()); ++k)
    for (int j = 0; j < static_cast<int>(m.x2.size()); ++j) {
      const int id = m.node_id[m.grid_node(i, j, k)];
      if (id >= 0)
        for (int c = 0; c < 3; ++c) map[3 * id + c] = -1;
    }
  free_count = 0;
  for (int& v : map)
    if (v == 0) v = free_count++;
  return map;
}

}  // namespace

HexMatrix hex_stiffness(const IsotropicMaterial& mat, double a, double b, double c, HexElement type) {
  const Voigt D = voigt_elasticity(mat);
  const GaussRule& q = gauss_legendre(2);
  const Eigen::Vector3d scale(2 / a, 2 / b, 2 / c);
  const double detJ = a * b * c / 8;
  Eigen::Matrix<double, 33, 33> K = Eigen::Matrix<double, 33, 33>::Zero();
  for (int gz = 0; gz < 2; ++gz)
    for (int gy = 0; gy < 2; ++gy)
      for (int gx = 0; gx < 2; ++gx) {
        const double xi[3] = {q.x[gx], q.x[gy], q.x[gz]};
        Eigen::Matrix<double, 6, 33> B = Eigen::Matrix<double, 6, 33>::Zero();
        for (int corner = 0; corner < 8; ++corner) {
          const double s[3] = {(corner & 1) ? 1.0 : -1.0, (corner & 2) ? 1.0 : -1.0, (corner & 4) ? 1.0 : -1.0};
          const double f[3] = {1 + s[0] * xi[0], 1 + s[1] * xi[1], 1 + s[2] * xi[2]};
          const Eigen::Vector3d g(0.125 * s[0] * f[1] * f[2] * scale[0], 0.125 * f[0] * s[1] * f[2] * scale[1],
                                  0.125 * f[0] * f[1] * s[2] * scale[2]);
          for (int comp = 0; comp < 3; ++comp) add_strain_columns(B, 3 * corner + comp, comp, g);
        }
        for (int mode = 0; mode < 3; ++mode) {
          Eigen::Vector3d g = Eigen::Vector3d::Zero();
          g[mode] = -2 * xi[mode] * scale[mode];
          for (int comp = 0; comp < 3; ++comp) add_strain_columns(B, 24 + 3 * mode + comp, comp, g);
        }
        K.noalias() += (detJ * q.w[gx] * q.w[gy] * q.w[gz]) * B.transpose() * D * B;
      }
  HexMatrix Kuu = K.topLeftCorner<24, 24>();
  if (type == HexElement::Trilinear) return Kuu;
  const Eigen::Matrix<double, 9, 9> Kaa = K.bottomRightCorner<9, 9>();
  const Eigen::Matrix<double, 24, 9> Kua = K.topRightCorner<24, 9>();
  HexMatrix Kc = Kuu - Kua * Kaa.ldlt().solve(Kua.transpose());
  return 0.5 * (Kc + Kc.transpose());
}

BodyForce push_forward_loads(const Loads& loads, const Geometry& g, const ScalingExponents& e, double eps) {
  const double ew = std::pow(eps, e.w), eh = std::pow(eps, e.h);
  const double emk = std::pow(eps, -e.k), emm = std::pow(eps, -e.m);
  const CrossSection xs = constants(g.W, g.H);
  return [=](double x1, double x2, double x3, CellTag tag) -> Eigen::Vector3d {
    auto plate = [&]() {
      const double X3 = x3 / eps;
      return Eigen::Vector3d(loads.plate[0](x1, x2, X3), loads.plate[1](x1, x2, X3), eps * loads.plate[2](x1, x2, X3));
    };
    auto stiff = [&]() {
      const double X2 = x2 / ew, X3 = x3 / eh;
      const double couple = emm * loads.torque(x1, 0, 0) / xs.IG;
      return Eigen::Vector3d(emk * loads.beam[0](x1, X2, X3),
                             emk * ew * (loads.beam[1](x1, X2, X3) - couple * (X3 - xs.centroid3())),
                             emk * eh * (loads.beam[2](x1, X2, X3) + couple * (X2 - xs.centroid2())));
    };
    switch (tag) {
      case CellTag::Plate: return plate();
      case CellTag::Stiffener: return stiff();
      case CellTag::Junction: return 0.5 * (plate() + stiff());
      default: return Eigen::Vector3d::Zero();
    }
  };
}

Eigen::SparseMatrix<double> assemble_stiffness_3d(const Mesh3D& m, const IsotropicMaterial& mat,
                                                  const Solve3DOptions& opt) {
  ElementCache cache(mat, opt.element);
  const auto cells = active_cells(m);
  auto trip = parallel_collect<Eigen::Triplet<double>>(
      cells.size(), opt.threads, opt.ordered, [&](std::size_t b, std::size_t e, std::vector<Eigen::Triplet<double>>& out) {
        for (std::size_t c = b; c < e; ++c) {
          const auto [i, j, k] = cells[c];
          const auto d = cell_size(m, i, j, k);
          const HexMatrix& Ke = cache.get(d[0], d[1], d[2]);
          const auto nodes = m.cell_nodes(i, j, k);
          for (int r = 0; r < 24; ++r)
            for (int s = 0; s < 24; ++s) out.emplace_back(3 * nodes[r / 3] + r % 3, 3 * nodes[s / 3] + s % 3, Ke(r, s));
        }
      });
  Eigen::SparseMatrix<double> K(3 * m.num_nodes, 3 * m.num_nodes);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Solution3D assemble_and_minimize(const Mesh3D& m, const IsotropicMaterial& mat, const BodyForce& load,
                                 const Solve3DOptions& opt) {
  int nfree = 0;
  const std::vector<int> map = clamp_map(m, nfree);
  if (nfree == 3 * m.num_nodes) throw std::runtime_error("no clamped nodes: singular 3D system");
  ElementCache cache(mat, opt.element);
  const auto cells = active_cells(m);
  const GaussRule& q = gauss_legendre(3);

  struct Entry {
    int row, col;
    double val;
  };
  auto entries = parallel_collect<Entry>(
      cells.size(), opt.threads, opt.ordered, [&](std::size_t b, std::size_t e, std::vector<Entry>& out) {
        for (std::size_t c = b; c < e; ++c) {
          const auto [i, j, k] = cells[c];
          const auto d = cell_size(m, i, j, k);
          const HexMatrix& Ke = cache.get(d[0], d[1], d[2]);
          const auto nodes = m.cell_nodes(i, j, k);
          std::array<int, 24> dof;
          for (int r = 0; r < 24; ++r) dof[r] = map[3 * nodes[r / 3] + r % 3];
          for (int r = 0; r < 24; ++r) {
            if (dof[r] < 0) continue;
            for (int s = 0; s < 24; ++s)
              if (dof[s] >= 0) out.push_back({dof[r], dof[s], Ke(r, s)});
          }
          // load vector entries are tagged with col = -1
          const CellTag tag = m.tag(i, j, k);
          Eigen::Matrix<double, 24, 1> fe = Eigen::Matrix<double, 24, 1>::Zero();
          for (int gz = 0; gz < 3; ++gz)
            for (int gy = 0; gy < 3; ++gy)
              for (int gx = 0; gx < 3; ++gx) {
                const double t[3] = {0.5 * (1 + q.x[gx]), 0.5 * (1 + q.x[gy]), 0.5 * (1 + q.x[gz])};
                const double wq = 0.125 * d[0] * d[1] * d[2] * q.w[gx] * q.w[gy] * q.w[gz];
                const Eigen::Vector3d bf =
                    load(m.x1[i] + t[0] * d[0], m.x2[j] + t[1] * d[1], m.x3[k] + t[2] * d[2], tag);
                if (bf.isZero(0)) continue;
                for (int corner = 0; corner < 8; ++corner) {
                  const double n = ((corner & 1) ? t[0] : 1 - t[0]) * ((corner & 2) ? t[1] : 1 - t[1]) *
                                   ((corner & 4) ? t[2] : 1 - t[2]);
                  fe.segment<3>(3 * corner) += wq * n * bf;
                }
              }
          for (int r = 0; r < 24; ++r)
            if (dof[r] >= 0 && fe[r] != 0) out.push_back({dof[r], -1, fe[r]});
        }
      });

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(entries.size());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(nfree);
  for (const Entry& en : entries) {
    if (en.col < 0) f[en.row] += en.val;
    else trip.emplace_back(en.row, en.col, en.val);
  }
  Eigen::SparseMatrix<double> K(nfree, nfree);
  K.setFromTriplets(trip.begin(), trip.end());

  Solution3D sol;
  sol.dofs = nfree;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nfree);
  if (f.norm() > 0) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(opt.rel_tol);
    cg.setMaxIterations(opt.max_iterations);
    cg.compute(K);
    if (cg.info() != Eigen::Success) throw std::runtime_error("3D preconditioner setup failed");
    x = cg.solve(f);
    sol.iterations = static_cast<int>(cg.iterations());
    sol.residual = (K * x - f).norm() / f.norm();
    if (cg.info() != Eigen::Success || !(sol.residual <= 10 * opt.rel_tol))
      throw std::runtime_error("3D CG did not converge, relative residual " + std::to_string(sol.residual));
  }
  sol.u = Eigen::VectorXd::Zero(3 * m.num_nodes);
  for (std::size_t d = 0; d < map.size(); ++d)
    if (map[d] >= 0) sol.u[static_cast<Eigen::Index>(d)] = x[map[d]];
  sol.work = f.dot(x);

  for (const auto& [i, j, k] : cells) {
    const auto d = cell_size(m, i, j, k);
    const HexMatrix& Ke = cache.get(d[0], d[1], d[2]);
    const auto nodes = m.cell_nodes(i, j, k);
    Eigen::Matrix<double, 24, 1> ue;
    for (int r = 0; r < 24; ++r) ue[r] = sol.u[3 * nodes[r / 3] + r % 3];
    const double we = 0.5 * ue.dot(Ke * ue);
    switch (m.tag(i, j, k)) {
      case CellTag::Plate: sol.W_plate += we; break;
      case CellTag::Stiffener: sol.W_stiffener += we; break;
      case CellTag::Junction:
        sol.W_plate += 0.5 * we;
        sol.W_stiffener += 0.5 * we;
        break;
      default: break;
    }
  }
  sol.stored = sol.W_plate + sol.W_stiffener;
  sol.energy = sol.stored - sol.work;
  return sol;
}

Eigen::Vector3d displacement_at(const Mesh3D& m, const Eigen::VectorXd& u, double x1, double x2, double x3) {
  auto candidates = [](const std::vector<double>& g, double x) {
    const int n = static_cast<int>(g.size()) - 1;
    int i = static_cast<int>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    std::array<int, 2> c = {i, -1};
    if (i > 0 && x == g[i]) c[1] = i - 1;
    return c;
  };
  const auto ci = candidates(m.x1, x1), cj = candidates(m.x2, x2), ck = candidates(m.x3, x3);
  for (int i : ci)
    for (int j : cj)
      for (int k : ck) {
        if (i < 0 || j < 0 || k < 0 || m.tag(i, j, k) == CellTag::Void) continue;
        const double t[3] = {(x1 - m.x1[i]) / (m.x1[i + 1] - m.x1[i]), (x2 - m.x2[j]) / (m.x2[j + 1] - m.x2[j]),
                             (x3 - m.x3[k]) / (m.x3[k + 1] - m.x3[k])};
        const auto nodes = m.cell_nodes(i, j, k);
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        for (int corner = 0; corner < 8; ++corner) {
          const double n = ((corner & 1) ? t[0] : 1 - t[0]) * ((corner & 2) ? t[1] : 1 - t[1]) *
                           ((corner & 4) ? t[2] : 1 - t[2]);
          v += n * u.segment<3>(3 * nodes[corner]);
        }
        return v;
      }
  throw std::out_of_range("sample point outside the 3D mesh");
}

Extracted extract_generalized(const Mesh3D& m, const Eigen::VectorXd& u, int plate_cells, int stations) {
  const ScalingExponents& e = m.exponents;
  const double L = m.geom.L, eps = m.eps;
  const double ew = std::pow(eps, e.w), eh = std::pow(eps, e.h), ek = std::pow(eps, e.k);
  const GaussRule& g2 = gauss_legendre(2);
  const int nt = m.res.n_thick;
  Extracted ex;

  // Thickness mean of u at (x1, x2): two Gauss points per layer.
  auto thickness_mean = [&](double x1, double x2) {
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    for (int k = 0; k < nt; ++k) {
      const double a = m.x3[k], h = m.x3[k + 1] - a;
      for (int q = 0; q < 2; ++q) s += 0.5 * h * g2.w[q] * displacement_at(m, u, x1, x2, a + 0.5 * (1 + g2.x[q]) * h);
    }
    return Eigen::Vector3d(s / m.plate_top);
  };

  const double hp = 2 * L / plate_cells;
  for (int b = 0; b < plate_cells; ++b)
    for (int a = 0; a < plate_cells; ++a)
      for (int qb = 0; qb < 2; ++qb)
        for (int qa = 0; qa < 2; ++qa) {
          const double x1 = -L + (a + 0.5 * (1 + g2.x[qa])) * hp;
          const double x2 = -L + (b + 0.5 * (1 + g2.x[qb])) * hp;
          const Eigen::Vector3d mu = thickness_mean(x1, x2);
          ex.px1.push_back(x1);
          ex.px2.push_back(x2);
          ex.pw.push_back(0.25 * hp * hp * g2.w[qa] * g2.w[qb]);
          ex.zeta1.push_back(mu[0]);
          ex.zeta2.push_back(mu[1]);
          ex.xi3.push_back(eps * mu[2]);
        }

  const JunctionRule rule = junction_flags(e);
  const int j0 = m.res.n_side, j1 = m.res.n_side + m.res.n_width;
  const double hb = 2 * L / stations;
  double diag = 0;
  for (int s = 0; s < stations; ++s)
    for (int q = 0; q < 2; ++q) {
      const double x1 = -L + (s + 0.5 * (1 + g2.x[q])) * hb;
      ex.bx1.push_back(x1);
      ex.bw.push_back(0.5 * hb * g2.w[q]);
      SectionSamples sec;
      for (int k = 0; k < m.c3(); ++k)
        for (int j = j0; j < j1; ++j) {
          const double a2 = m.x2[j], h2 = m.x2[j + 1] - a2, a3 = m.x3[k], h3 = m.x3[k + 1] - a3;
          for (int qk = 0; qk < 2; ++qk)
            for (int qj = 0; qj < 2; ++qj) {
              const double x2 = a2 + 0.5 * (1 + g2.x[qj]) * h2, x3 = a3 + 0.5 * (1 + g2.x[qk]) * h3;
              const Eigen::Vector3d v = displacement_at(m, u, x1, x2, x3);
              sec.x2.push_back(x2 / ew);
              sec.x3.push_back(x3 / eh);
              sec.weight.push_back(0.25 * h2 * h3 * g2.w[qj] * g2.w[qk] / (ew * eh));
              sec.u2.push_back(ew * v[1]);
              sec.u3.push_back(eh * v[2]);
            }
        }
      const RigidProjection rp = project_rigid(sec);
      // Weighted least squares u1 ~ c0 + c2 X2 + c3 X3 for the axial intercept.
      Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
      Eigen::Vector3d r = Eigen::Vector3d::Zero();
      std::size_t idx = 0;
      for (int k = 0; k < m.c3(); ++k)
        for (int j = j0; j < j1; ++j) {
          const double a2 = m.x2[j], h2 = m.x2[j + 1] - a2, a3 = m.x3[k], h3 = m.x3[k + 1] - a3;
          for (int qk = 0; qk < 2; ++qk)
            for (int qj = 0; qj < 2; ++qj, ++idx) {
              const double x2 = a2 + 0.5 * (1 + g2.x[qj]) * h2, x3 = a3 + 0.5 * (1 + g2.x[qk]) * h3;
              const double u1 = displacement_at(m, u, x1, x2, x3)[0];
              const Eigen::Vector3d phi(1.0, sec.x2[idx], sec.x3[idx]);
              A += sec.weight[idx] * phi * phi.transpose();
              r += sec.weight[idx] * u1 * phi;
            }
        }
      const Eigen::Vector3d coef = A.ldlt().solve(r);
      ex.xi1.push_back(ek * coef[0]);
      ex.xi2.push_back(ek * rp.t2);
      ex.xi3_beam.push_back(ek * rp.t3);
      ex.theta_scaled.push_back(std::pow(eps, e.k - e.m) * rp.theta);
      ex.theta_phys.push_back(rp.theta / (ew * eh));

      double pt = 0, bt = 0;
      for (int k = 0; k < nt; ++k) {
        const double a3 = m.x3[k], h3 = m.x3[k + 1] - a3;
        for (int qk = 0; qk < 2; ++qk)
          pt += 0.5 * h3 * g2.w[qk] * displacement_at(m, u, x1, 0.0, a3 + 0.5 * (1 + g2.x[qk]) * h3)[0];
      }
      for (int j = j0; j < j1; ++j) {
        const double a2 = m.x2[j], h2 = m.x2[j + 1] - a2;
        for (int qj = 0; qj < 2; ++qj)
          bt += 0.5 * h2 * g2.w[qj] * displacement_at(m, u, x1, a2 + 0.5 * (1 + g2.x[qj]) * h2, 0.0)[0];
      }
      pt /= m.plate_top;
      bt /= 2 * m.half_width;
      ex.plate_trace1.push_back(pt);
      ex.beam_trace1.push_back(bt);
      const double mis = rule.rho_hat[kAxial] * pt - rule.rho_check[kAxial] * ek * bt;
      diag += ex.bw.back() * mis * mis;
    }
  ex.junction_diagnostic = std::sqrt(diag);
  return ex;
}

Eigen::Matrix3d scaled_plate_strain(const Eigen::Matrix3d& grad_u_hat, double eps) {
  const Eigen::Vector3d qi(1, 1, 1 / eps);
  const Eigen::Matrix3d h = qi.asDiagonal() * grad_u_hat * qi.asDiagonal();
  return 0.5 * (h + h.transpose());
}

Eigen::Matrix3d scaled_beam_strain(const Eigen::Matrix3d& grad_u_check, const ScalingExponents& e, double eps) {
  const Eigen::Vector3d qi(1, std::pow(eps, -e.w), std::pow(eps, -e.h));
  const Eigen::Matrix3d h = qi.asDiagonal() * grad_u_check * qi.asDiagonal();
  return 0.5 * (h + h.transpose());
}

}  // namespace stiffplate
