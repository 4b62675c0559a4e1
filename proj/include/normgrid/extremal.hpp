#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid::extremal {

/// Q = {0, 1, ..., 2N} u {j^2 : j <= N}. Every integer in [0, N^2] is a
/// difference of two elements (j = ceil(sqrt(j))^2 - s with 0 <= s <= 2N),
/// while |Q| <= 3N + 1: a near-optimal difference-coverage set.
FrequencySet build_sidon_quadratic(std::int64_t n);

/// First j in [0, limit] that is NOT a difference of two elements of q
/// (-1 when coverage is complete). Exhaustive.
std::int64_t sidon_coverage_gap(const FrequencySet& q, std::int64_t limit);

/// Lacunary frequency scaffold k_n, ..., k_{2n-1} with blocks of half-width
/// nu around each k_j. The four clauses:
///   (1) k_{j+1} >= b k_j   (2) k_n | k_j   (3) nu <= (b-1) k_n / 3
///   (4) nu n <= K k_n
struct ConditionLParams {
  int n = 1;
  double b = 2.0;
  double big_k = 1.0;
  std::int64_t nu = 0;
  std::vector<std::int64_t> k_values;  // k_n .. k_{2n-1}
};

struct ConditionLCheck {
  bool ok = true;
  int clause = 0;  // 1..4, or 0 when ok / structural
  std::string what;
};

ConditionLCheck verify_condition_l(const ConditionLParams& params);

/// Integer-geometric construction k_j = k_n ceil(b)^{j-n} with the minimal
/// feasible base k_n = max(ceil(3 nu / (b-1)), ceil(nu n / K), ceil(b)).
/// All four clauses are re-verified before returning.
ConditionLParams build_condition_l(int n, double b, std::int64_t nu, double big_k);

/// Slow-growth variant: k_{j+1} is the smallest multiple of k_n that is
/// >= b k_j. For b close to 1 the frequencies stay polynomially small where
/// the ceil(b)-geometric ladder would overflow.
ConditionLParams build_condition_l_minimal(int n, double b, std::int64_t nu,
                                           double big_k);

/// Union of the blocks {k : |k - k_j| <= nu}; clause (3) keeps them disjoint,
/// so the set has exactly n (2 nu + 1) frequencies.
FrequencySet lacunary_frequency_set(const ConditionLParams& params);

struct SmallBallReport {
  double c_hat = 0.0;  // max over probes of sum_j ||p_j||_1 / ||f||_inf
  int n = 1;
  int trials = 0;
  std::uint64_t seed = 0;
  int best_trial = -1;       // -1 = the deterministic flat witness
  std::string best_mode;     // "flat" | "gaussian" | "unimodular"
  std::vector<double> ratios;
};

/// Empirical constant for sum_j ||p_j||_1 <= C ||f||_inf over block
/// polynomials f(x) = sum_{j=n}^{2n-1} p_j(x) e^{i k_j x}, deg p_j <= nu.
/// Probes: the flat all-ones witness plus per-trial Gaussian and unimodular
/// coefficient draws; random draws alone miss extremizers, hence the
/// structured witness is always included.
SmallBallReport small_ball_probe(const ConditionLParams& params, int trials,
                                 std::uint64_t seed);

struct LacunaryRatioRow {
  std::string family;  // "uniform" | "random"
  int m = 0;
  double ratio = 0.0;  // fixed-set sup-norm ratio (inf when unbounded)
  bool bounded = true;
  double ratio_over_sqrt_n = 0.0;
};

struct LacunaryRatioReport {
  int n_freq = 0;  // N = |Lambda|
  std::vector<LacunaryRatioRow> rows;
  std::uint64_t seed = 0;
};

/// Fixed-set sup-norm ratios of the symmetrized lacunary span on uniform and
/// random node families of the given sizes, tabulated as ratio / sqrt(N).
/// Consistency probe for the sqrt(N) lower-bound regime, not a proof: it
/// measures our candidate families only. Requires nu = 0 and N <= 64.
LacunaryRatioReport lacunary_ratio_probe(const ConditionLParams& params,
                                         const std::vector<int>& point_budgets,
                                         std::uint64_t seed, int oversample = 2,
                                         const Tolerances& tol = {},
                                         int threads = 1);

struct Gft2Witness {
  int n_vars = 0;
  int q = 2;
  int m = 0;             // binom(n_vars + q - 1, q)
  Matrix nodes;          // m x n_vars coordinates in [0,1)
  Vector lambda;         // unique exact-discretization weights
  double residual_uniform = 0.0;  // max |lambda_nu - 1/m|
  double scaled_det = 0.0;
  std::uint64_t seed = 0;
  int attempts = 1;
};

/// Determinant-greedy node set for the degree-q monomial lift of the
/// coordinate system on [0,1)^N, sized square (m = dim of the lift), with the
/// uniform measure carried by the nodes themselves. The moment system is then
/// invertible, so lambda = 1/m is its unique solution; the report carries the
/// verified residual. Singular draws retry with a doubled candidate pool.
Gft2Witness gft2_witness(int n_vars, int q, std::uint64_t seed = 1,
                         const Tolerances& tol = {});

}  // namespace normgrid::extremal
