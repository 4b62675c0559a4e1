#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/weighted_rule.hpp"

namespace normgrid::exact {

struct NodeSelection {
  std::vector<Index> indices;  // chosen candidate rows, in selection order
  double det = 0.0;            // determinant of the selected square matrix
  double scaled_det = 0.0;     // after scaling each function row to unit max
};

/// Greedy determinant-maximizing node selection. `candidate_values` has one
/// row per candidate point and one column per function; step k maximizes
/// |det [u_i(xi_j)]_{i,j<=k}| over the remaining candidates (ties: lowest
/// row index). The step-k score is a linear form in the candidate row (the
/// cofactor expansion along the new column), computed from an orthogonal
/// complement of the previously selected columns. Throws SpanDeficiency
/// naming the first step at which every candidate is degenerate.
NodeSelection select_nodes_by_determinant(const Matrix& candidate_values,
                                          int count,
                                          const Tolerances& tol = {});

/// Dual (cardinal) basis on interpolation nodes: psi_j with
/// f = sum_j f(xi_j) psi_j for every f in the span.
struct RecoveryOperator {
  PointSet nodes;
  Matrix dual_coeffs;  // row j: coefficients of psi_j in the basis

  /// psi_j(x) for all j.
  Vector dual_values(const OrthoSystem& sys, const Vector& x) const {
    return dual_coeffs * sys.eval_all(x);
  }
  /// Reconstruct f(x) from samples f(xi_j).
  double reconstruct(const OrthoSystem& sys, const Vector& samples,
                     const Vector& x) const {
    return samples.dot(dual_values(sys, x));
  }
};

/// Convenience wrapper: determinant-greedy selection of sys.size() nodes.
PointSet select_nodes(const OrthoSystem& sys, const PointSet& candidates,
                      const Tolerances& tol = {});

/// Interpolation operator on exactly n = sys.size() nodes (square system).
RecoveryOperator build_recovery(const OrthoSystem& sys, const PointSet& nodes,
                                const Tolerances& tol = {});

/// Interpolatory cubature: determinant-greedy nodes from the candidates, then
/// weights solving the moment system. Works on a maximal linearly independent
/// subset of the functions (rank-revealing QR), and checks the residual of
/// the full moment vector, so linearly dependent spans are handled. Weights
/// may be negative.
WeightedRule exact_cubature(const OrthoSystem& sys, const PointSet& candidates,
                            const Tolerances& tol = {});

/// Cubature against an explicit moment vector (integration oracle for a
/// measure other than the uniform one).
WeightedRule exact_cubature(const OrthoSystem& sys, const PointSet& candidates,
                            const Vector& moments, const Tolerances& tol = {});

/// Same, with externally supplied values/moments (used by the lift).
WeightedRule cubature_from_values(const Matrix& candidate_values,
                                  const PointSet& candidates,
                                  const Vector& moments,
                                  const Tolerances& tol = {});

/// Bookkeeping for the power lift: all products u_1^{e_1} ... u_n^{e_n} with
/// e >= 0 and sum e_i = q, in lexicographic exponent order.
/// Cardinality binom(n + q - 1, q).
struct LiftedSystem {
  int base_size = 0;
  int q = 0;
  std::vector<std::vector<int>> exponents;

  int size() const { return static_cast<int>(exponents.size()); }
  /// Product values from base values (rows = points).
  Matrix eval_matrix(const Matrix& base_values) const;
  /// Exact means of the products (coefficient convolution for torus systems,
  /// table means for tabulated ones).
  Vector exact_moments(const OrthoSystem& base) const;
};

LiftedSystem lift_power(int base_size, int q);

/// Weighted rule integrating |f|^q exactly over the span (q even >= 2):
/// cubature for the lifted system on a dense grid, 16 x Nyquist of the
/// lifted frequencies by default. Node count is at most binom(n+q-1, q).
WeightedRule exact_weighted_discretization(const OrthoSystem& sys, int q,
                                           int grid_oversample = 16,
                                           const Tolerances& tol = {});

struct TchakaloffResult {
  WeightedRule rule;
  double moment_residual = 0.0;
  int nnls_iterations = 0;
};

/// Nonnegative compression: a rule with at most sys.size() nodes and
/// lambda >= 0 matching all moments of `input` (nonnegative least squares
/// over input nodes + a dense candidate grid, plus support pruning).
TchakaloffResult tchakaloff_compress(const OrthoSystem& sys,
                                     const WeightedRule& input,
                                     int grid_oversample = 16,
                                     const Tolerances& tol = {});

/// Probability variant: the constant is appended to the moment system, so
/// weights stay nonnegative, sum to the input mass (1 for the uniform
/// measure), with at most sys.size() + 1 nodes.
TchakaloffResult tchakaloff_probability(
    const OrthoSystem& sys, const std::optional<WeightedRule>& input = {},
    int grid_oversample = 16, const Tolerances& tol = {});

/// Positive rule integrating f^q exactly (q >= 1): power lift + nonnegative
/// compression against the exact lifted moments.
TchakaloffResult positive_exact_lq(const OrthoSystem& sys, int q,
                                   int grid_oversample = 16,
                                   const Tolerances& tol = {});

struct StableWeightsResult {
  Vector lambda;
  double stability_norm = 0.0;  // (sum |l/mu|^p' mu)^{1/p'}, dual exponent
  double measured_c1 = 0.0;     // one-sided constant of (w_points, mu)
  bool c1_empirical = false;    // p = 1 constant comes from probes
  double p = 2.0;
  double p_dual = 2.0;
};

/// Weights matching all moments with minimal weighted dual norm, given that
/// (w_points, mu) satisfies the one-sided inequality
///   ||f|| <= C1 (sum_w mu_w |f(w)|^p)^{1/p}   for all f in the span.
/// The constant is measured, not assumed: exactly for p = 2 (Gram
/// eigenvalue), by the certified LP grid sweep for p = inf, by probes for
/// p = 1. For p in {2, inf} the minimized norm provably stays below the
/// measured constant and this is asserted (+1e-6 slack); for p = 1 the probe
/// estimate can undershoot the true constant, so the reported constant is
/// the larger of the probe estimate and the achieved norm (itself a valid
/// lower bound of the true constant by duality), with no assertion.
StableWeightsResult stable_exact_weights(const OrthoSystem& sys,
                                         const PointSet& w_points,
                                         const Vector& mu, double p,
                                         int oversample = 8,
                                         const Tolerances& tol = {});

/// Reproducing-kernel recovery from an exactly L2-discretizing rule:
/// psi_j = lambda_j sum_i u_i(xi_j) u_i. Requires the weighted Gram to be
/// the identity within tolerance.
RecoveryOperator recovery_from_exact_l2(const OrthoSystem& sys,
                                        const WeightedRule& rule,
                                        const Tolerances& tol = {});

}  // namespace normgrid::exact
