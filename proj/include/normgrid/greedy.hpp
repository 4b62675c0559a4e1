#pragma once

#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/weighted_rule.hpp"

namespace normgrid::greedy {

/// Rank-one atom G(x) = u(x) u(x)^T; trace(G) = sum_i u_i(x)^2.
Matrix gram_atom(const OrthoSystem& sys, const Vector& x);

/// Per-iteration history (for plots / regression checks).
struct GreedyTrace {
  std::vector<double> residual_norms;   // after each iteration
  std::vector<Index> selected;          // candidate row chosen per iteration
};

struct OgaResult {
  WeightedRule rule;       // distinct selected nodes with projection weights
  GreedyTrace trace;       // Frobenius residual ||I - sum lambda G||_F
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
};

/// Orthogonal greedy approximation of the identity in span{G(x)}: each
/// iteration picks the candidate maximizing |<R, G(x)>_F| (weakness w keeps
/// any candidate within w of the max; w = 1 is the plain deterministic
/// argmax, ties to the lowest index), then re-projects I onto the selected
/// atoms. Stops at residual <= target, at max_iter (0 = the packed dimension
/// n(n+1)/2), or throws SpanDeficiency when the candidates stagnate above
/// the target. Candidate sets are capped at 1e5 points.
OgaResult oga_exact_l2(const OrthoSystem& sys, const PointSet& candidates,
                       int max_iter = 0, double target_residual = 1e-7,
                       double weakness = 1.0, const Tolerances& tol = {});

struct RgaResult {
  PointSet points;     // m selected points, repetition allowed
  GreedyTrace trace;   // normalized error ||(1/k) sum G - I||_F / (n t^2)
  double final_error = 0.0;  // unnormalized, at k = m
  double b = 0.0;            // the normalization n t^2
};

/// Relaxed greedy with step 1/k, which makes the iterate the running average
/// (1/k) sum G(xi^j). Since I/(n t^2) is a convex combination of the
/// normalized atoms whenever the candidate grid averages G to the identity,
/// the normalized error is at most 2/sqrt(k) at every iteration.
RgaResult rga_equal_weight(const OrthoSystem& sys, const PointSet& candidates,
                           int m, const Tolerances& tol = {});

}  // namespace normgrid::greedy
