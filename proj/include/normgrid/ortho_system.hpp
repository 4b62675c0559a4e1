#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/trig_polynomial.hpp"

namespace normgrid {

/// Finite real orthonormal system u_1, ..., u_n with pointwise evaluation.
///
/// Two concrete families:
///  - torus_trig: the real trigonometric basis of a symmetric frequency set:
///    the constant 1 for k = 0, then sqrt(2) cos(k.x), sqrt(2) sin(k.x) per
///    +/- pair (canonical representative = lexicographically larger),
///    ordered by representative. Orthonormal in L2(T^d, dx/(2pi)^d).
///    The coordinate sum of squares w(x) = sum_i u_i(x)^2 equals n at every
///    x, so the uniform-boundedness constant is t = 1 exactly.
///  - tabulated: columns of a value table over a finite domain of M points,
///    orthonormal w.r.t. the uniform measure (1/M) sum_j u_i(x_j) u_k(x_j)
///    = delta_ik. Points of the domain are addressed by row index; sampled
///    point sets store the index in coordinate 0.
class OrthoSystem {
 public:
  enum class Kind { torus_trig, tabulated };

  /// Real trig basis of a symmetric frequency set.
  static OrthoSystem torus_trig(const FrequencySet& q);
  /// Explicit span of real trig polynomials (assumed orthonormal); used for
  /// small hand-built spans such as {sqrt2 cos, sqrt2 sin}.
  static OrthoSystem torus_span(std::vector<TrigPolynomial> basis);
  /// Value table (M x n), orthonormal w.r.t. uniform measure on `domain`.
  static OrthoSystem tabulated(Matrix values, PointSet domain,
                               double orthonormality_tol = 1e-8);
  /// Walsh system: first n rows of the 2^k x 2^k Sylvester-Hadamard matrix,
  /// tabulated on m = 2^k uniform points; |u_i| = 1 everywhere, so t = 1.
  static OrthoSystem walsh(int n, int log2_m);

  Kind kind() const { return kind_; }
  int size() const { return n_; }
  int point_dim() const { return point_dim_; }

  /// Values of all n functions at x.
  Vector eval_all(const Vector& x) const;
  /// Value matrix, pts.size() x n.
  Matrix eval_matrix(const PointSet& pts) const;

  /// sup_x sum_i u_i(x)^2 (exact for torus_trig: = n; table max otherwise).
  double sup_sum_squares() const;
  /// Uniform-boundedness constant t with sup w <= n t^2.
  double condition_t() const { return std::sqrt(sup_sum_squares() / n_); }

  /// Exact mean of each basis function over the domain.
  Vector moments() const;

  // torus access
  const std::vector<TrigPolynomial>& trig_forms() const;
  TrigPolynomial combine(const Vector& coeffs) const;
  /// Union of basis supports.
  const FrequencySet& frequency_support() const;
  /// Canonical evaluation grid: oversample x Nyquist points per axis.
  PointSet reference_grid(int oversample) const;

  // tabulated access
  const Matrix& table_values() const;
  const PointSet& domain_points() const;
  /// Point set addressing rows `idx` of the table.
  PointSet domain_subset(const std::vector<std::size_t>& idx) const;
  /// Table row addressed by a stored point (coordinate 0 = index).
  Index table_row(const Vector& x) const;

 private:
  Kind kind_ = Kind::torus_trig;
  int n_ = 0;
  int point_dim_ = 0;
  std::vector<TrigPolynomial> trig_basis_;
  FrequencySet support_;
  Matrix table_;
  PointSet domain_;
};

}  // namespace normgrid
