#pragma once

#include <utility>

#include "normgrid/common.hpp"

namespace normgrid::numkernel {

/// Determinant via partial-pivot LU. Requires a square matrix.
double det_lu(const Matrix& a);

/// (smallest, largest) eigenvalue of a symmetric matrix. Throws
/// NumericalFailure if `a` deviates from symmetry by more than
/// tol.symmetry relative to its magnitude.
std::pair<double, double> sym_eig_extreme(const Matrix& a,
                                          const Tolerances& tol = {});

struct NnlsResult {
  Vector x;
  double residual_norm = 0.0;  // ||A x - b||_2
  double kkt_residual = 0.0;   // max gradient violation at exit
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set nonnegative least squares:
/// min ||A x - b||_2 subject to x >= 0.
/// max_iter = 0 means the default cap of 3 * cols.
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iter = 0,
                const Tolerances& tol = {});

enum class LpStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  Vector x;
};

/// min c.x subject to A x = b, x >= 0 (standard computational form).
/// Dense two-phase simplex; Dantzig entering rule with a permanent switch to
/// Bland's rule after a degeneracy stall, lowest-index tie-breaks throughout,
/// so the path is deterministic and finite.
SimplexResult simplex_solve(const Matrix& a, const Vector& b, const Vector& c,
                            const Tolerances& tol = {});

struct LpValue {
  double value = 0.0;
  bool bounded = true;
  Vector ray;  // when unbounded: direction r with V r = 0 and a.r > 0
};

/// max a.c subject to |(V c)_j| <= 1 for every row j of V. Solved through
/// its L1 dual (min sum y over V^T y = a, y split in signs), which keeps the
/// tableau at rows = dim rather than rows = #constraints. Caps: V has at
/// most 5000 rows and 200 columns.
LpValue lp_chebyshev(const Matrix& v, const Vector& a,
                     const Tolerances& tol = {});

/// Minimum weighted dual-norm solution of A lambda = b:
///   p_dual = 2:   min (sum lambda_w^2 / mu_w)^{1/2}      (closed form);
///   p_dual = 1:   min sum |lambda_w|                     (mu cancels);
///   p_dual = inf: min max |lambda_w| / mu_w.
/// Throws Infeasible when b is not in the column span of A.
Vector min_weighted_norm_solution(const Matrix& a, const Vector& b,
                                  const Vector& mu, double p_dual,
                                  const Tolerances& tol = {});

/// Weighted dual-norm of a weight vector: (sum |l_w/mu_w|^p' mu_w)^{1/p'},
/// with p_dual = inf read as max |l_w|/mu_w.
double weighted_dual_norm(const Vector& lambda, const Vector& mu,
                          double p_dual);

}  // namespace normgrid::numkernel
