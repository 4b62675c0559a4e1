#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/weighted_rule.hpp"

namespace normgrid::certify {

/// Two-sided discretization certificate for a rule on a space:
///   c1 * ||f||_q^q <= sum_j lambda_j |f(xi_j)|^q <= c2 * ||f||_q^q
/// (q = 2 exact via Gram eigenvalues; q = 1 empirical; q = inf is stored as
/// the fixed-set ratio sup ||f||_inf / max_j |f(xi_j)| with c1 = 1/ratio).
struct DiscretizationCertificate {
  double q = 2.0;
  int m = 0;        // node count
  int n = 0;        // space dimension
  double c1 = 0.0;
  double c2 = 0.0;
  std::string method;  // "eigen_exact" | "lp_grid" | "empirical_probe"
  bool empirical = false;
  bool unbounded = false;  // q = inf: no finite ratio on this node set
  double ratio = 0.0;      // q = inf fixed-set ratio (inf when unbounded)
  std::uint64_t seed = 0;
  double tol_feasibility = 0.0;

  /// Largest eps with [c1, c2] inside [1 - eps, 1 + eps].
  double eps_two_sided() const {
    return std::max(1.0 - c1, c2 - 1.0);
  }
};

/// Exact L2 certificate: extreme eigenvalues of the weighted Gram matrix
/// sum_j lambda_j u(xi_j) u(xi_j)^T of an orthonormal system.
DiscretizationCertificate certify_l2(const OrthoSystem& sys,
                                     const WeightedRule& rule,
                                     const Tolerances& tol = {});

struct LinftyReport {
  double ratio = 0.0;  // max over the reference grid of the LP value
  bool bounded = true;
  Vector worst_point;  // argmax reference point
  DiscretizationCertificate cert;
};

/// Fixed-set L-infinity ratio by linear programming: for each reference-grid
/// point x, maximize f(x) subject to |f(xi_j)| <= 1 over the real span; the
/// grid maximum is a certified lower bound of the true ratio that converges
/// from below as the grid refines. Unbounded LP (nodes not norming) sets the
/// flag instead of a value. `threads` parallelizes over grid points; the
/// result is reduced index-deterministically, so it does not depend on the
/// thread count.
LinftyReport certify_linfty(const OrthoSystem& sys, const PointSet& nodes,
                            int refgrid_oversample, const Tolerances& tol = {},
                            int threads = 1);

/// Same LP sweep over an explicit probe point set instead of the canonical
/// oversampled grid (used when frequencies are too large for a dense grid).
LinftyReport certify_linfty_at(const OrthoSystem& sys, const PointSet& nodes,
                               const PointSet& probes,
                               const Tolerances& tol = {}, int threads = 1);

/// Empirical L1 certificate: extremizes the ratio
/// (sum_j lambda_j |f(xi_j)|) / ||f||_1 over random, single-mode, and
/// node-vanishing probes with a coordinate-descent refinement pass.
/// c1/c2 are the observed min/max ratios; always tagged empirical.
DiscretizationCertificate certify_l1(const OrthoSystem& sys,
                                     const WeightedRule& rule,
                                     int probe_budget, std::uint64_t seed,
                                     int grid_oversample = 16);

/// Nikolskii-type conversion: given an L2 certificate with c1 > 0 for an
/// n-function system and a rule of total mass <= 1, every f in the span obeys
/// ||f||_inf <= sqrt(n) / sqrt(c1) * max_j |f(xi_j)|. Returns that factor.
double linfty_from_l2(const DiscretizationCertificate& l2_cert);

struct RemezReport {
  double max_ratio = 1.0;        // worst ||f||_grid,inf / sup off the cut set
  double measure_fraction = 0.0; // realized |B| / grid size
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> ratios;    // per trial
};

/// Remez-type probe: removes a random union of grid cells B of prescribed
/// normalized measure and compares the full grid sup of random span elements
/// with the sup over the complement.
RemezReport remez_check(const FrequencySet& space, double measure_fraction,
                        int trials, std::uint64_t seed, int oversample = 8);

struct BernsteinReport {
  double c_hat = 0.0;  // max ratio ||f^(1,..,1)||_inf / (N (log N)^{d-1} ||f||_inf)
  std::int64_t n = 0;
  int dim = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Empirical mixed-derivative constant on the hyperbolic cross T(Gamma(N,d)):
/// random real elements plus the full-order single mode e^{i N x_1} (d = 1:
/// that probe alone puts c_hat at 1). Grid sups, natural log.
BernsteinReport bernstein_probe(std::int64_t n, int dim, int trials,
                                std::uint64_t seed, int oversample = 8);

}  // namespace normgrid::certify

namespace normgrid {
// The certificate type travels across every module; keep its name visible
// from the parent namespace.
using certify::DiscretizationCertificate;
}  // namespace normgrid
