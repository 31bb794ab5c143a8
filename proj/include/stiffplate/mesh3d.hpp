#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stiffplate/limit_solver.hpp"
#include "stiffplate/regime.hpp"

namespace stiffplate {

/// Cell counts per region of the tensor grid. Side cells in x2 grow
/// geometrically away from the stiffener with ratio `side_grading`.
struct Resolution3D {
  int n1 = 24;
  int n_width = 12;
  int n_side = 10;
  int n_thick = 3;
  int n_rise = 18;
  double side_grading = 1.25;
};

enum class CellTag : std::uint8_t { Void = 0, Plate, Stiffener, Junction };

/// Structured hexahedral mesh of the physical domain: the plate
/// (-L,L)^2 x (0, eps T) joined with the stiffener
/// (-L,L) x eps^w (-W,W) x (0, eps^h H).
struct Mesh3D {
  Geometry geom;
  ScalingExponents exponents;
  double eps = 1;
  Resolution3D res;
  double half_width = 0;  // eps^w W
  double plate_top = 0;   // eps T
  double stiff_top = 0;   // eps^h H
  std::vector<double> x1, x2, x3;  // grid lines
  std::vector<CellTag> tags;
  std::vector<int> node_id;  // grid node -> compact node, -1 if unused
  int num_nodes = 0;
  double max_aspect = 0;
  std::vector<std::string> warnings;

  int c1() const { return static_cast<int>(x1.size()) - 1; }
  int c2() const { return static_cast<int>(x2.size()) - 1; }
  int c3() const { return static_cast<int>(x3.size()) - 1; }
  int cell(int i, int j, int k) const { return i + c1() * (j + c2() * k); }
  int grid_node(int i, int j, int k) const {
    return i + static_cast<int>(x1.size()) * (j + static_cast<int>(x2.size()) * k);
  }
  CellTag tag(int i, int j, int k) const { return tags[cell(i, j, k)]; }
  /// Compact ids of the 8 corners in lexicographic (x fastest) order.
  std::array<int, 8> cell_nodes(int i, int j, int k) const;
  std::size_t count(CellTag t) const;
};

Mesh3D build_mesh(const Geometry& g, const ScalingExponents& e, double eps, const Resolution3D& res);

}  // namespace stiffplate
