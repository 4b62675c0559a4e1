#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid::hypercross {

/// (alpha_d, beta_d) = (sum_{j<=d} 1/j, d - alpha_d).
std::pair<double, double> alpha_beta(int d);

/// Circle grid {2 pi j / m : j = 0..m-1}.
PointSet build_vm(std::int64_t m);

struct HypercrossParams {
  std::int64_t n = 2;      // hyperbolic-cross parameter, >= 2
  int d = 1;               // dimension
  double eps = 0.1;        // in (0, 1/8)
  double c0 = 4.0;         // derivative-growth constant (probe x safety)
  double base_grid_factor = 4.0;  // W(N,1) point count = ceil(factor * n)
};

struct HypercrossSet {
  PointSet points;  // deduplicated, rows sorted lexicographically
  std::vector<std::int64_t> m_sequence;       // M at levels 2..d
  std::vector<std::int64_t> pre_dedup_sizes;  // level l construction count
  std::vector<std::int64_t> level_sizes;      // |W(n, l)| after dedup
  double alpha = 0.0;
  double beta = 0.0;
};

/// Recursive point set for uniform-norm discretization of hyperbolic-cross
/// polynomials. Level 1 is the ceil(factor*n)-point uniform circle grid;
/// level l inserts every V_M value into every coordinate slot of the level
/// l-1 set, with M = smallest integer satisfying
/// c0 * M^{-l} * n (log n)^{l-1} <= eps. Coordinates are exact multiples of
/// 2 pi / M, so deduplication uses exact equality. The pre-dedup count at
/// level l is exactly l * M_l * |W(n, l-1)|.
HypercrossSet build_w(const HypercrossParams& params);

struct VerifyWReport {
  double c_hat = 0.0;   // observed sup-norm ratio constant
  bool bounded = true;
  std::string method;   // "lp_grid" | "probe"
  int trials = 0;
  std::uint64_t seed = 0;
  int refgrid_oversample = 0;
};

/// Empirical constant for || f ||_inf <= C max_{w in W} |f(w)| over the
/// real span of the hyperbolic cross Gamma(n) in dimension d. Uses the
/// certified LP sweep when the LP caps allow it, otherwise random-probe
/// ratio maximization (`trials` seeded draws).
VerifyWReport verify_w(std::int64_t n, int d, const PointSet& w,
                       int refgrid_oversample, int trials, std::uint64_t seed,
                       const Tolerances& tol = {}, int threads = 1);

}  // namespace normgrid::hypercross
