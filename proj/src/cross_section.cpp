#include "stiffplate/cross_section.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include <Eigen/Sparse>

#include "stiffplate/csv.hpp"
#include "stiffplate/quadrature.hpp"

namespace stiffplate {

CrossSection constants(double W, double H) {
  if (!(W > 0) || !(H > 0)) throw std::domain_error("cross-section sizes must be positive");
  CrossSection c;
  c.W = W;
  c.H = H;
  c.A = 2 * W * H;
  c.S2 = W * H * H;
  c.J2 = 2.0 / 3.0 * W * H * H * H;
  c.J3 = 2.0 / 3.0 * W * W * W * H;
  c.Jt_w = 8.0 / 3.0 * H * W * W * W;
  c.Jt_h = 2.0 / 3.0 * W * H * H * H;
  c.IG = c.A * (W * W / 3 + H * H / 12);
  return c;
}

namespace {

struct Tri {
  std::array<int, 3> node;
  std::array<Eigen::Vector2d, 3> grad;
  Eigen::Vector2d centroid;
  double area;
};

// Uniform grid split along the rising diagonal of each cell.
std::vector<Tri> triangulate(double W, double H, int n2, int n3) {
  const double h2 = 2 * W / n2, h3 = H / n3;
  std::vector<Tri> tris;
  tris.reserve(2 * n2 * n3);
  auto id = [n2](int i, int j) { return i + (n2 + 1) * j; };
  for (int j = 0; j < n3; ++j) {
    for (int i = 0; i < n2; ++i) {
      const double x0 = -W + i * h2, y0 = j * h3;
      const std::array<Eigen::Vector2d, 4> p = {Eigen::Vector2d(x0, y0), Eigen::Vector2d(x0 + h2, y0),
                                                Eigen::Vector2d(x0 + h2, y0 + h3),
                                                Eigen::Vector2d(x0, y0 + h3)};
      const std::array<int, 4> ids = {id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
      for (const auto& loc : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 3}}) {
        Tri t;
        const Eigen::Vector2d& a = p[loc[0]];
        const Eigen::Vector2d& b = p[loc[1]];
        const Eigen::Vector2d& c = p[loc[2]];
        const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        t.area = 0.5 * std::abs(det);
        for (int k = 0; k < 3; ++k) {
          const Eigen::Vector2d& q1 = p[loc[(k + 1) % 3]];
          const Eigen::Vector2d& q2 = p[loc[(k + 2) % 3]];
          t.grad[k] = Eigen::Vector2d(q1.y() - q2.y(), q2.x() - q1.x()) / det;
          t.node[k] = ids[loc[k]];
        }
        t.centroid = (a + b + c) / 3.0;
        tris.push_back(t);
      }
    }
  }
  return tris;
}

Eigen::Vector2d torsion_vector(const Eigen::Vector2d& x, double H) {
  return Eigen::Vector2d(x.y() - 0.5 * H, -x.x());
}

}  // namespace

double TorsionField::mean() const {
  const double h2 = 2 * W / n2, h3 = H / n3;
  double s = 0;
  for (int j = 0; j <= n3; ++j)
    for (int i = 0; i <= n2; ++i) {
      const double wi = (i == 0 || i == n2) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == n3) ? 0.5 : 1.0;
      s += wi * wj * value(i, j);
    }
  // Trapezoidal weights integrate the piecewise-linear interpolant exactly.
  return s * h2 * h3 / (2 * W * H);
}

TorsionField solve_torsion(double W, double H, int n, double rel_tol) {
  if (n < 8) throw std::invalid_argument("torsion grid size must be at least 8");
  if (!(W > 0) || !(H > 0)) throw std::domain_error("cross-section sizes must be positive");
  TorsionField f;
  f.W = W;
  f.H = H;
  f.n2 = n;
  f.n3 = n;
  const int nn = (n + 1) * (n + 1);
  const auto tris = triangulate(W, H, n, n);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(tris.size() * 9);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nn);
  for (const Tri& t : tris) {
    const Eigen::Vector2d vc = torsion_vector(t.centroid, H);
    for (int a = 0; a < 3; ++a) {
      b[t.node[a]] += t.area * vc.dot(t.grad[a]);
      for (int c = 0; c < 3; ++c) trip.emplace_back(t.node[a], t.node[c], t.area * t.grad[a].dot(t.grad[c]));
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> K(nn, nn);
  K.setFromTriplets(trip.begin(), trip.end());
  b.array() -= b.mean();

  // CG on the complement of constants.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nn);
  Eigen::VectorXd r = b;
  Eigen::VectorXd p = r;
  const double bnorm = b.norm();
  double rr = r.squaredNorm();
  const long cap = 20L * n * n;
  long it = 0;
  if (bnorm > 0) {
    for (; it < cap && std::sqrt(rr) > rel_tol * bnorm; ++it) {
      Eigen::VectorXd Kp = K * p;
      const double alpha = rr / p.dot(Kp);
      x += alpha * p;
      r -= alpha * Kp;
      r.array() -= r.mean();
      const double rr_new = r.squaredNorm();
      p = r + (rr_new / rr) * p;
      rr = rr_new;
    }
    if (std::sqrt(rr) > rel_tol * bnorm)
      throw std::runtime_error("torsion CG did not converge, relative residual " +
                               std::to_string(std::sqrt(rr) / bnorm));
  }
  f.phi = x;
  f.iterations = static_cast<int>(it);
  f.residual = bnorm > 0 ? std::sqrt(rr) / bnorm : 0.0;
  f.phi.array() -= f.mean();

  double J = 0;
  for (const Tri& t : tris) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int a = 0; a < 3; ++a) g += f.phi[t.node[a]] * t.grad[a];
    // v is linear on the triangle: exact second moment from vertex values.
    std::array<Eigen::Vector2d, 3> vv;
    for (int a = 0; a < 3; ++a) {
      const int i2 = t.node[a] % (n + 1), i3 = t.node[a] / (n + 1);
      vv[a] = torsion_vector(Eigen::Vector2d(f.x2(i2), f.x3(i3)), H);
    }
    double vsq = 0;
    for (int a = 0; a < 3; ++a)
      for (int c = a; c < 3; ++c) vsq += vv[a].dot(vv[c]);
    vsq *= t.area / 6.0;
    const Eigen::Vector2d vc = torsion_vector(t.centroid, H);
    J += vsq - 2 * t.area * g.dot(vc) + t.area * g.squaredNorm();
  }
  f.J_phi = J;
  return f;
}

double TorsionField::equation_residual() const {
  const auto tris = triangulate(W, H, n2, n3);
  Eigen::VectorXd res = Eigen::VectorXd::Zero(phi.size());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(phi.size());
  for (const Tri& t : tris) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int a = 0; a < 3; ++a) g += phi[t.node[a]] * t.grad[a];
    const Eigen::Vector2d vc = torsion_vector(t.centroid, H);
    for (int a = 0; a < 3; ++a) {
      res[t.node[a]] += t.area * (vc - g).dot(t.grad[a]);
      b[t.node[a]] += t.area * vc.dot(t.grad[a]);
    }
  }
  const double scale = b.lpNorm<Eigen::Infinity>();
  return scale > 0 ? res.lpNorm<Eigen::Infinity>() / scale : res.lpNorm<Eigen::Infinity>();
}

void TorsionField::write_csv(const std::string& path) const {
  CsvWriter csv(path, {"x2", "x3", "phi"});
  for (int j = 0; j <= n3; ++j)
    for (int i = 0; i <= n2; ++i) csv.row({x2(i), x3(j), value(i, j)});
}

RigidProjection project_rigid(const SectionSamples& s) {
  const std::size_t n = s.weight.size();
  if (s.x2.size() != n || s.x3.size() != n || s.u2.size() != n || s.u3.size() != n)
    throw std::invalid_argument("section sample arrays differ in length");
  double area = 0, g2 = 0, g3 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    area += s.weight[i];
    g2 += s.weight[i] * s.x2[i];
    g3 += s.weight[i] * s.x3[i];
  }
  if (!(area > 0)) throw std::invalid_argument("section samples carry no weight");
  g2 /= area;
  g3 /= area;
  RigidProjection p;
  double ig = 0, mom = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = s.x2[i] - g2, z = s.x3[i] - g3;
    p.t2 += s.weight[i] * s.u2[i];
    p.t3 += s.weight[i] * s.u3[i];
    ig += s.weight[i] * (y * y + z * z);
    mom += s.weight[i] * (y * s.u3[i] - z * s.u2[i]);
  }
  p.t2 /= area;
  p.t3 /= area;
  p.theta = mom / ig;
  return p;
}

SectionSamples section_quadrature(double W, double H, int cells, int order) {
  const GaussRule& g = gauss_legendre(order);
  SectionSamples s;
  const double h2 = 2 * W / cells, h3 = H / cells;
  for (int j = 0; j < cells; ++j)
    for (int i = 0; i < cells; ++i)
      for (int qj = 0; qj < order; ++qj)
        for (int qi = 0; qi < order; ++qi) {
          s.x2.push_back(-W + (i + 0.5 * (1 + g.x[qi])) * h2);
          s.x3.push_back((j + 0.5 * (1 + g.x[qj])) * h3);
          s.weight.push_back(0.25 * h2 * h3 * g.w[qi] * g.w[qj]);
        }
  s.u2.assign(s.weight.size(), 0.0);
  s.u3.assign(s.weight.size(), 0.0);
  return s;
}

}  // namespace stiffplate
