#include "stiffplate/mesh3d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stiffplate {

namespace {

void append_uniform(std::vector<double>& v, double a, double b, int n) {
  for (int i = 1; i <= n; ++i) v.push_back(a + (b - a) * i / n);
}

// Cells growing from `a` towards `b` by `ratio`.
std::vector<double> graded(double a, double b, int n, double ratio) {
  std::vector<double> out;
  double total = 0, h = 1;
  for (int i = 0; i < n; ++i, h *= ratio) total += h;
  double x = a;
  h = (b - a) / total;
  for (int i = 0; i < n; ++i, h *= ratio) {
    x += h;
    out.push_back(i == n - 1 ? b : x);
  }
  return out;
}

}  // namespace

std::array<int, 8> Mesh3D::cell_nodes(int i, int j, int k) const {
  std::array<int, 8> n{};
  int c = 0;
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) n[c++] = node_id[grid_node(i + di, j + dj, k + dk)];
  return n;
}

std::size_t Mesh3D::count(CellTag t) const { return static_cast<std::size_t>(std::count(tags.begin(), tags.end(), t)); }

Mesh3D build_mesh(const Geometry& g, const ScalingExponents& e, double eps, const Resolution3D& res) {
  validate(g);
  if (!(eps > 0 && eps <= 1)) throw std::domain_error("eps must lie in (0, 1]");
  if (res.n1 < 1 || res.n_width < 2 || res.n_side < 1 || res.n_thick < 2 || res.n_rise < 1)
    throw std::invalid_argument("3D resolution needs n1>=1, n_width>=2, n_side>=1, n_thick>=2, n_rise>=1");
  if (!(res.side_grading >= 1)) throw std::invalid_argument("side grading must be >= 1");
  Mesh3D m;
  m.geom = g;
  m.exponents = e;
  m.eps = eps;
  m.res = res;
  m.half_width = std::pow(eps, e.w) * g.W;
  m.plate_top = eps * g.T;
  m.stiff_top = std::pow(eps, e.h) * g.H;
  if (!(m.half_width < g.L)) throw std::domain_error("stiffener wider than the plate at this eps");
  if (!(m.stiff_top > m.plate_top)) throw std::domain_error("stiffener does not rise above the plate at this eps");

  m.x1.push_back(-g.L);
  append_uniform(m.x1, -g.L, g.L, res.n1);

  auto side = graded(m.half_width, g.L, res.n_side, res.side_grading);
  m.x2.push_back(-g.L);
  for (int i = res.n_side - 2; i >= 0; --i) m.x2.push_back(-side[i]);
  m.x2.push_back(-m.half_width);
  append_uniform(m.x2, -m.half_width, m.half_width, res.n_width);
  for (double x : side) m.x2.push_back(x);

  m.x3.push_back(0.0);
  append_uniform(m.x3, 0.0, m.plate_top, res.n_thick);
  append_uniform(m.x3, m.plate_top, m.stiff_top, res.n_rise);

  const int n1 = m.c1(), n2 = m.c2(), n3 = m.c3();
  m.tags.assign(static_cast<std::size_t>(n1) * n2 * n3, CellTag::Void);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const bool in_plate = k < res.n_thick;
        const bool in_strip = j >= res.n_side && j < res.n_side + res.n_width;
        CellTag t = CellTag::Void;
        if (in_plate && in_strip) t = CellTag::Junction;
        else if (in_plate) t = CellTag::Plate;
        else if (in_strip) t = CellTag::Stiffener;
        m.tags[m.cell(i, j, k)] = t;
      }

  m.node_id.assign(m.x1.size() * m.x2.size() * m.x3.size(), -1);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        if (m.tag(i, j, k) == CellTag::Void) continue;
        const double d[3] = {m.x1[i + 1] - m.x1[i], m.x2[j + 1] - m.x2[j], m.x3[k + 1] - m.x3[k]};
        m.max_aspect = std::max(m.max_aspect, *std::max_element(d, d + 3) / *std::min_element(d, d + 3));
        for (int dk = 0; dk < 2; ++dk)
          for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) m.node_id[m.grid_node(i + di, j + dj, k + dk)] = 0;
      }
  for (int& id : m.node_id)
    if (id == 0) id = m.num_nodes++;
  if (m.max_aspect > 1e4) {
    std::ostringstream os;
    os << "degenerate 3D cells: aspect ratio " << m.max_aspect << " exceeds 1e4";
    throw std::domain_error(os.str());
  }
  if (m.max_aspect > 200) {
    std::ostringstream os;
    os << "cell aspect ratio " << m.max_aspect << " exceeds 200";
    m.warnings.push_back(os.str());
  }
  return m;
}

}  // namespace stiffplate
