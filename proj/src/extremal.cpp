#include "normgrid/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "normgrid/certify.hpp"
#include "normgrid/exact.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/rng.hpp"
#include "normgrid/trig_polynomial.hpp"

namespace normgrid::extremal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest integer >= x, with a hair of slack so that quotients that are
// integers up to roundoff do not get bumped by one.
std::int64_t ceil_slack(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

std::int64_t binom_capped_i64(int a, int b, std::int64_t cap) {
  if (b < 0 || b > a) return 0;
  long double r = 1.0L;
  for (int i = 1; i <= b; ++i) {
    r = r * static_cast<long double>(a - b + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap) * 2.0L) return cap * 2;
  }
  return static_cast<std::int64_t>(std::llroundl(r));
}

ConditionLParams fill_ladder(int n, double b, std::int64_t nu, double big_k,
                             std::vector<std::int64_t> k_values) {
  ConditionLParams p;
  p.n = n;
  p.b = b;
  p.big_k = big_k;
  p.nu = nu;
  p.k_values = std::move(k_values);
  ConditionLCheck check = verify_condition_l(p);
  if (!check.ok) {
    throw Infeasible("build_condition_l: clause " + std::to_string(check.clause) +
                     " violated: " + check.what);
  }
  return p;
}

std::int64_t minimal_base(int n, double b, std::int64_t nu, double big_k) {
  if (n < 1) throw std::invalid_argument("condition L: n >= 1");
  if (!(b > 1.0)) throw std::invalid_argument("condition L: b > 1");
  if (nu < 0) throw std::invalid_argument("condition L: nu >= 0");
  if (!(big_k > 0.0)) throw std::invalid_argument("condition L: K > 0");
  const std::int64_t from_blocks =
      ceil_slack(3.0 * static_cast<double>(nu) / (b - 1.0));
  const std::int64_t from_budget =
      ceil_slack(static_cast<double>(nu) * n / big_k);
  const auto ceil_b = static_cast<std::int64_t>(std::ceil(b));
  return std::max<std::int64_t>({from_blocks, from_budget, ceil_b, 1});
}

}  // namespace

FrequencySet build_sidon_quadratic(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("build_sidon_quadratic: N >= 1");
  if (n > 100000) {
    throw std::invalid_argument("build_sidon_quadratic: desk-scale cap N <= 1e5");
  }
  std::vector<std::vector<std::int64_t>> freqs;
  freqs.reserve(static_cast<std::size_t>(3 * n + 2));
  for (std::int64_t j = 0; j <= 2 * n; ++j) freqs.push_back({j});
  for (std::int64_t j = 0; j <= n; ++j) freqs.push_back({j * j});
  FrequencySet q = build_explicit(1, std::move(freqs));
  return q;
}

std::int64_t sidon_coverage_gap(const FrequencySet& q, std::int64_t limit) {
  if (q.dim != 1) throw std::invalid_argument("sidon_coverage_gap: dim 1 only");
  if (limit < 0 || limit > 50000000) {
    throw std::invalid_argument("sidon_coverage_gap: 0 <= limit <= 5e7");
  }
  std::vector<char> covered(static_cast<std::size_t>(limit) + 1, 0);
  const std::size_t sz = q.freqs.size();
  for (std::size_t a = 0; a < sz; ++a) {
    for (std::size_t b = 0; b < sz; ++b) {
      const std::int64_t d = q.freqs[a][0] - q.freqs[b][0];
      if (d >= 0 && d <= limit) covered[static_cast<std::size_t>(d)] = 1;
    }
  }
  for (std::int64_t j = 0; j <= limit; ++j) {
    if (!covered[static_cast<std::size_t>(j)]) return j;
  }
  return -1;
}

ConditionLCheck verify_condition_l(const ConditionLParams& params) {
  ConditionLCheck check;
  auto fail = [&](int clause, const std::string& what) {
    check.ok = false;
    check.clause = clause;
    check.what = what;
    return check;
  };
  if (params.n < 1 || params.k_values.size() != static_cast<std::size_t>(params.n)) {
    return fail(0, "k_values must hold exactly n entries");
  }
  if (!(params.b > 1.0) || !(params.big_k > 0.0) || params.nu < 0) {
    return fail(0, "require b > 1, K > 0, nu >= 0");
  }
  const std::int64_t base = params.k_values.front();
  if (base < 1) return fail(0, "frequencies must be positive");
  // tiny relative slack so real-valued clauses tolerate double roundoff
  const long double slack = 1.0L - 1e-12L;
  for (std::size_t i = 0; i + 1 < params.k_values.size(); ++i) {
    const long double lhs = static_cast<long double>(params.k_values[i + 1]);
    const long double rhs = static_cast<long double>(params.b) *
                            static_cast<long double>(params.k_values[i]);
    if (lhs < rhs * slack) {
      return fail(1, "growth k_{j+1} >= b k_j fails at j offset " +
                         std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < params.k_values.size(); ++i) {
    if (params.k_values[i] % base != 0) {
      return fail(2, "k at offset " + std::to_string(i) +
                         " is not divisible by k_n");
    }
  }
  {
    const long double lhs = 3.0L * static_cast<long double>(params.nu);
    const long double rhs = (static_cast<long double>(params.b) - 1.0L) *
                            static_cast<long double>(base);
    if (lhs > rhs / slack + 1e-9L) {
      return fail(3, "block half-width nu exceeds (b-1) k_n / 3");
    }
  }
  {
    const long double lhs =
        static_cast<long double>(params.nu) * static_cast<long double>(params.n);
    const long double rhs = static_cast<long double>(params.big_k) *
                            static_cast<long double>(base);
    if (lhs > rhs / slack + 1e-9L) {
      return fail(4, "nu n exceeds K k_n");
    }
  }
  return check;
}

ConditionLParams build_condition_l(int n, double b, std::int64_t nu,
                                   double big_k) {
  const std::int64_t base = minimal_base(n, b, nu, big_k);
  const auto ceil_b = static_cast<std::int64_t>(std::ceil(b));
  const double bits = std::log2(static_cast<double>(base)) +
                      (n - 1) * std::log2(static_cast<double>(ceil_b));
  if (bits > 62.0) {
    throw std::invalid_argument(
        "build_condition_l: geometric ladder overflows 64-bit frequencies; "
        "use build_condition_l_minimal");
  }
  std::vector<std::int64_t> k(static_cast<std::size_t>(n));
  k[0] = base;
  for (int j = 1; j < n; ++j) k[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(j - 1)] * ceil_b;
  return fill_ladder(n, b, nu, big_k, std::move(k));
}

ConditionLParams build_condition_l_minimal(int n, double b, std::int64_t nu,
                                           double big_k) {
  const std::int64_t base = minimal_base(n, b, nu, big_k);
  std::vector<std::int64_t> k(static_cast<std::size_t>(n));
  k[0] = base;
  for (int j = 1; j < n; ++j) {
    const std::int64_t prev = k[static_cast<std::size_t>(j - 1)];
    auto mult = static_cast<std::int64_t>(
        std::ceil(b * static_cast<double>(prev) / static_cast<double>(base) -
                  1e-9));
    while (static_cast<long double>(mult) * static_cast<long double>(base) <
           static_cast<long double>(b) * static_cast<long double>(prev)) {
      ++mult;
    }
    if (mult > (std::int64_t(1) << 50) / base) {
      throw std::invalid_argument(
          "build_condition_l_minimal: frequencies overflow the cap");
    }
    k[static_cast<std::size_t>(j)] = mult * base;
  }
  return fill_ladder(n, b, nu, big_k, std::move(k));
}

FrequencySet lacunary_frequency_set(const ConditionLParams& params) {
  ConditionLCheck check = verify_condition_l(params);
  if (!check.ok) {
    throw std::invalid_argument("lacunary_frequency_set: " + check.what);
  }
  std::vector<std::vector<std::int64_t>> freqs;
  freqs.reserve(params.k_values.size() *
                (2 * static_cast<std::size_t>(params.nu) + 1));
  for (std::int64_t kj : params.k_values) {
    for (std::int64_t l = -params.nu; l <= params.nu; ++l) {
      freqs.push_back({kj + l});
    }
  }
  FrequencySet out = build_explicit(1, std::move(freqs));
  out.kind = FrequencySet::Kind::lacunary;
  out.params = params.k_values;
  if (out.size() != params.n * (2 * params.nu + 1)) {
    throw NumericalFailure("lacunary blocks overlap despite clause (3)");
  }
  return out;
}

SmallBallReport small_ball_probe(const ConditionLParams& params, int trials,
                                 std::uint64_t seed) {
  ConditionLCheck check = verify_condition_l(params);
  if (!check.ok) {
    throw std::invalid_argument("small_ball_probe: " + check.what);
  }
  if (trials < 1) throw std::invalid_argument("small_ball_probe: trials >= 1");
  const std::int64_t top = params.k_values.back() + params.nu;
  if (top > 20000) {
    throw std::invalid_argument("small_ball_probe: max frequency cap is 2e4");
  }

  const int n = params.n;
  const std::int64_t nu = params.nu;
  const auto block_len = static_cast<Index>(2 * nu + 1);
  std::vector<std::vector<std::int64_t>> block_freqs;
  for (std::int64_t l = -nu; l <= nu; ++l) block_freqs.push_back({l});
  const FrequencySet block_support = build_explicit(1, block_freqs);
  const FrequencySet full_support = lacunary_frequency_set(params);
  // full_support is sorted ascending and blocks are disjoint, so coefficient
  // index (j - n) * (2 nu + 1) + (l + nu) matches its freq order.

  SmallBallReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;

  auto ratio_of = [&](const ComplexVector& coeffs) {
    double sum_l1 = 0.0;
    for (int j = 0; j < n; ++j) {
      TrigPolynomial pj(block_support,
                        coeffs.segment(j * block_len, block_len));
      sum_l1 += lq_norm_grid(pj, 1.0, 32);
    }
    TrigPolynomial f(full_support, coeffs);
    const double sup = lq_norm_grid(f, kInf, 8);
    return sup > 0.0 ? sum_l1 / sup : 0.0;
  };
  auto consider = [&](double ratio, int trial, const char* mode) {
    rep.ratios.push_back(ratio);
    if (ratio > rep.c_hat) {
      rep.c_hat = ratio;
      rep.best_trial = trial;
      rep.best_mode = mode;
    }
  };

  const Index dim = static_cast<Index>(n) * block_len;
  consider(ratio_of(ComplexVector::Ones(dim)), -1, "flat");
  for (int t = 0; t < trials; ++t) {
    SplitMix64 g = SplitMix64::derive(seed, static_cast<std::uint64_t>(t));
    ComplexVector gauss(dim), uni(dim);
    for (Index i = 0; i < dim; ++i) {
      const double re = g.normal();
      const double im = g.normal();
      gauss[i] = std::complex<double>(re, im);
      uni[i] = std::polar(1.0, kTwoPi * g.uniform());
    }
    consider(ratio_of(gauss), t, "gaussian");
    consider(ratio_of(uni), t, "unimodular");
  }
  return rep;
}

LacunaryRatioReport lacunary_ratio_probe(const ConditionLParams& params,
                                         const std::vector<int>& point_budgets,
                                         std::uint64_t seed, int oversample,
                                         const Tolerances& tol, int threads) {
  ConditionLCheck check = verify_condition_l(params);
  if (!check.ok) {
    throw std::invalid_argument("lacunary_ratio_probe: " + check.what);
  }
  if (params.nu != 0) {
    throw std::invalid_argument("lacunary_ratio_probe: nu = 0 families only");
  }
  if (params.n > 64) {
    throw std::invalid_argument("lacunary_ratio_probe: desk-scale cap N <= 64");
  }
  if (point_budgets.empty()) {
    throw std::invalid_argument("lacunary_ratio_probe: no point budgets");
  }
  if (oversample < 1) oversample = 1;
  const std::int64_t top = params.k_values.back();
  if (static_cast<double>(oversample) * (2.0 * static_cast<double>(top) + 1.0) > 40000.0) {
    throw std::invalid_argument(
        "lacunary_ratio_probe: reference grid exceeds the 4e4 cap");
  }

  const FrequencySet lambda = lacunary_frequency_set(params);
  const OrthoSystem sys = OrthoSystem::torus_trig(symmetrize(lambda));
  const double sqrt_n = std::sqrt(static_cast<double>(lambda.size()));

  LacunaryRatioReport rep;
  rep.n_freq = lambda.size();
  rep.seed = seed;
  for (int m : point_budgets) {
    if (m < 1) throw std::invalid_argument("lacunary_ratio_probe: m >= 1");
    for (int family = 0; family < 2; ++family) {
      PointSet nodes =
          (family == 0)
              ? uniform_grid({m})
              : random_torus(m, 1,
                             SplitMix64::derive(seed, static_cast<std::uint64_t>(m))
                                 .next());
      certify::LinftyReport lr =
          certify::certify_linfty(sys, nodes, oversample, tol, threads);
      LacunaryRatioRow row;
      row.family = family == 0 ? "uniform" : "random";
      row.m = m;
      row.bounded = lr.bounded;
      row.ratio = lr.bounded ? lr.ratio : kInf;
      row.ratio_over_sqrt_n = row.ratio / sqrt_n;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

Gft2Witness gft2_witness(int n_vars, int q, std::uint64_t seed,
                         const Tolerances& tol) {
  if (n_vars < 1) throw std::invalid_argument("gft2_witness: N >= 1");
  if (q < 2 || q % 2 != 0) {
    throw std::invalid_argument("gft2_witness: q must be even and >= 2");
  }
  const std::int64_t m64 = binom_capped_i64(n_vars + q - 1, q, 500);
  if (m64 > 500) {
    throw std::invalid_argument("gft2_witness: binom(N+q-1, q) cap is 500");
  }
  const int m = static_cast<int>(m64);
  const exact::LiftedSystem lift = exact::lift_power(n_vars, q);
  if (lift.size() != m) {
    throw NumericalFailure("gft2_witness: lift size mismatch");
  }

  for (int attempt = 0; attempt < 4; ++attempt) {
    const Index pool = static_cast<Index>(4 * m) << attempt;
    SplitMix64 g = SplitMix64::derive(seed, static_cast<std::uint64_t>(attempt));
    Matrix cand(pool, n_vars);
    for (Index i = 0; i < pool; ++i) {
      for (int j = 0; j < n_vars; ++j) cand(i, j) = g.uniform();
    }
    Matrix values = lift.eval_matrix(cand);
    exact::NodeSelection sel;
    try {
      sel = exact::select_nodes_by_determinant(values, m, tol);
    } catch (const SpanDeficiency&) {
      continue;  // degenerate draw: enlarge the pool and redraw
    }
    Matrix v(m, m);
    for (int r = 0; r < m; ++r) v.row(r) = values.row(sel.indices[static_cast<std::size_t>(r)]);
    const Vector b = v.colwise().mean().transpose();
    Eigen::PartialPivLU<Matrix> lu(v.transpose());
    const Vector lambda = lu.solve(b);
    const double uniform_w = 1.0 / static_cast<double>(m);
    const double residual =
        (lambda.array() - uniform_w).abs().maxCoeff();
    if (residual > 1e-9 || lambda.cwiseAbs().minCoeff() <= 0.0) {
      continue;  // conditioning too poor to certify uniqueness; redraw
    }
    Gft2Witness wit;
    wit.n_vars = n_vars;
    wit.q = q;
    wit.m = m;
    wit.nodes.resize(m, n_vars);
    for (int r = 0; r < m; ++r) {
      wit.nodes.row(r) = cand.row(sel.indices[static_cast<std::size_t>(r)]);
    }
    wit.lambda = lambda;
    wit.residual_uniform = residual;
    wit.scaled_det = sel.scaled_det;
    wit.seed = seed;
    wit.attempts = attempt + 1;
    return wit;
  }
  throw NumericalFailure(
      "gft2_witness: no well-conditioned node set after 4 candidate pools");
}

}  // namespace normgrid::extremal
