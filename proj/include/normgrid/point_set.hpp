#pragma once

#include <cstdint>
#include <vector>

#include "normgrid/common.hpp"

namespace normgrid {

/// Finite point set, one point per row, on the torus [0, 2pi)^dim or the unit
/// cube [0, 1)^dim. Row order is part of the value (algorithms tie-break by
/// index), so constructors document their ordering.
struct PointSet {
  enum class Frame { torus, cube };

  int dim = 0;
  Frame frame = Frame::torus;
  Matrix points;  // size() x dim

  int size() const { return static_cast<int>(points.rows()); }
  Vector point(Index i) const { return points.row(i).transpose(); }

  static std::string frame_name(Frame f) {
    return f == Frame::torus ? "torus" : "cube";
  }
  static Frame frame_from_name(const std::string& name);
};

/// Canonical grid for the box Pi(N): x^n_j = 2 pi n_j / (2 N_j + 1),
/// n_j in {0, ..., 2 N_j}. Rows in odometer order, last axis fastest.
PointSet canonical_grid(const std::vector<std::int64_t>& n);

/// Tensor grid with `per_axis[j]` equispaced torus points on axis j,
/// x_j = 2 pi i / per_axis[j]. Odometer order, last axis fastest.
PointSet uniform_grid(const std::vector<std::int64_t>& per_axis);

/// m i.i.d. uniform points on the torus, in draw order.
PointSet random_torus(int m, int dim, std::uint64_t seed);

/// Wrap a raw matrix of unit-cube points.
PointSet cube_points(Matrix pts01);

/// Map cube points to the torus by x -> 2 pi x.
PointSet scale_to_torus(const PointSet& cube);

/// Subset of rows, in the given order.
PointSet select_rows(const PointSet& ps, const std::vector<Index>& rows);

/// Concatenate rows of two sets with equal dim and frame.
PointSet concat_points(const PointSet& a, const PointSet& b);

}  // namespace normgrid
