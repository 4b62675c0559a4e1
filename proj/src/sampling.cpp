#include "normgrid/sampling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "normgrid/numkernel.hpp"
#include "normgrid/rng.hpp"
#include "normgrid/weighted_rule.hpp"

namespace normgrid::sampling {

double chernoff_bound(int n, double eta, double s_over_r, Tail tail) {
  if (n < 1) throw std::invalid_argument("chernoff_bound: n >= 1 required");
  if (s_over_r < 0.0)
    throw std::invalid_argument("chernoff_bound: s/R must be nonnegative");
  double exponent = 0.0;
  if (tail == Tail::lower) {
    if (eta < 0.0 || eta >= 1.0)
      throw std::invalid_argument("chernoff_bound: lower tail needs eta in [0,1)");
    exponent = -eta - (1.0 - eta) * std::log1p(-eta);
  } else {
    if (eta < 0.0)
      throw std::invalid_argument("chernoff_bound: upper tail needs eta >= 0");
    exponent = eta - (1.0 + eta) * std::log1p(eta);
  }
  return static_cast<double>(n) * std::exp(s_over_r * exponent);
}

SamplePlan plan_sample_size(int n, double t, double eps, double delta) {
  if (n < 1) throw std::invalid_argument("plan_sample_size: n >= 1 required");
  if (t <= 0.0) throw std::invalid_argument("plan_sample_size: t must be > 0");
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("plan_sample_size: eps must be in (0,1)");
  if (delta <= 0.0 || delta >= 1.0)
    throw std::invalid_argument("plan_sample_size: delta must be in (0,1)");

  SamplePlan plan;
  plan.n = n;
  plan.t = t;
  plan.eps = eps;
  plan.delta = delta;
  plan.r = static_cast<double>(n) * t * t;

  const double log_term = std::log(2.0 * n / delta);
  const double c_lower = eps + (1.0 - eps) * std::log1p(-eps);
  const double c_upper = (1.0 + eps) * std::log1p(eps) - eps;
  const double c_min = std::min(c_lower, c_upper);

  auto ok = [&](long long m) {
    const double s_over_r = static_cast<double>(m) / plan.r;
    return chernoff_bound(n, eps, s_over_r, Tail::lower) <= delta / 2.0 &&
           chernoff_bound(n, eps, s_over_r, Tail::upper) <= delta / 2.0;
  };

  long long m = static_cast<long long>(std::ceil(plan.r * log_term / c_min));
  if (m < 1) m = 1;
  while (!ok(m)) ++m;
  while (m > 1 && ok(m - 1)) --m;
  plan.m = m;
  plan.derived_c = static_cast<double>(m) * eps * eps /
                   (t * t * static_cast<double>(n) * log_term);
  return plan;
}

namespace {

PointSet draw_iid(const OrthoSystem& sys, int m, std::uint64_t seed) {
  if (sys.kind() == OrthoSystem::Kind::tabulated) {
    SplitMix64 gen(seed);
    const std::uint64_t rows =
        static_cast<std::uint64_t>(sys.table_values().rows());
    std::vector<std::size_t> idx(static_cast<std::size_t>(m));
    for (auto& i : idx) i = static_cast<std::size_t>(gen.below(rows));
    return sys.domain_subset(idx);
  }
  return random_torus(m, sys.point_dim(), seed);
}

PointSet draw_from_grid(const OrthoSystem& sys, int m, std::uint64_t seed) {
  const PointSet grid = sys.kind() == OrthoSystem::Kind::tabulated
                            ? sys.domain_points()
                            : sys.reference_grid(8);
  SplitMix64 gen(seed);
  std::vector<Index> rows(static_cast<std::size_t>(m));
  for (auto& r : rows) {
    r = static_cast<Index>(gen.below(static_cast<std::uint64_t>(grid.size())));
  }
  return select_rows(grid, rows);
}

}  // namespace

SampleCertified sample_and_certify_l2(const OrthoSystem& sys, int m,
                                      std::uint64_t seed, SampleMode mode,
                                      const Tolerances& tol) {
  if (m < 1) throw std::invalid_argument("sample_and_certify_l2: m >= 1");
  SampleCertified out;
  out.points = mode == SampleMode::grid ? draw_from_grid(sys, m, seed)
                                        : draw_iid(sys, m, seed);
  out.cert = certify::certify_l2(sys, WeightedRule::equal_weight(out.points), tol);
  out.cert.seed = seed;
  return out;
}

SubsetResult subset_select_discrete(const OrthoSystem& sys, int m, int trials,
                                    std::uint64_t seed,
                                    const Tolerances& tol) {
  if (sys.kind() != OrthoSystem::Kind::tabulated)
    throw std::invalid_argument(
        "subset_select_discrete: needs a tabulated domain");
  const std::size_t rows =
      static_cast<std::size_t>(sys.table_values().rows());
  if (m < 1 || static_cast<std::size_t>(m) > rows)
    throw std::invalid_argument("subset_select_discrete: need 1 <= m <= M");
  if (trials < 1)
    throw std::invalid_argument("subset_select_discrete: trials >= 1");

  SubsetResult best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 gen = SplitMix64::derive(seed, static_cast<std::uint64_t>(trial));
    auto idx = gen.sample_without_replacement(rows, static_cast<std::size_t>(m));
    WeightedRule rule;
    rule.nodes = sys.domain_subset(idx);
    rule.weights = Vector::Constant(m, 1.0 / m);
    auto cert = certify::certify_l2(sys, rule, tol);
    const double score = std::min(cert.c1, 2.0 - cert.c2);
    if (score > best_score) {
      best_score = score;
      best.indices = std::move(idx);
      best.cert = cert;
      best.best_trial = trial;
    }
  }
  best.cert.seed = seed;
  return best;
}

SampleCertified sample_and_certify_l1(const OrthoSystem& sys, int m,
                                      std::uint64_t seed, int probe_budget,
                                      int grid_oversample) {
  if (sys.size() < 1)
    throw std::invalid_argument("sample_and_certify_l1: empty system");
  if (m < 1) throw std::invalid_argument("sample_and_certify_l1: m >= 1");
  SampleCertified out;
  out.points = draw_iid(sys, m, seed);
  const std::uint64_t probe_seed = SplitMix64::derive(seed, 1).next();
  out.cert = certify::certify_l1(sys, WeightedRule::equal_weight(out.points),
                        probe_budget, probe_seed, grid_oversample);
  out.cert.seed = seed;
  return out;
}

MonteCarloDomain monte_carlo_domain(const OrthoSystem& sys, double delta,
                                    std::uint64_t seed, int max_rounds,
                                    const Tolerances& tol) {
  const int n = sys.size();
  if (n < 1) throw std::invalid_argument("monte_carlo_domain: empty system");
  if (delta <= 0.0)
    throw std::invalid_argument("monte_carlo_domain: delta must be > 0");

  MonteCarloDomain out;
  out.delta = delta;

  // Fourth-moment sanity probe (finite for every tabulated or trigonometric
  // system; recorded, not thresholded).
  {
    const Matrix v = sys.kind() == OrthoSystem::Kind::tabulated
                         ? sys.table_values()
                         : sys.eval_matrix(sys.reference_grid(4));
    out.fourth_moment =
        v.array().pow(4.0).colwise().mean().maxCoeff();
  }

  const double threshold = delta / n;
  double best_dev = std::numeric_limits<double>::infinity();
  for (int round = 0; round <= max_rounds; ++round) {
    const long long m = 1LL << round;
    if (m > (1LL << 22)) break;
    const std::uint64_t round_seed =
        SplitMix64::derive(seed, static_cast<std::uint64_t>(round)).next();
    PointSet pts = draw_iid(sys, static_cast<int>(m), round_seed);
    const Matrix v = sys.eval_matrix(pts);
    const Matrix gram = v.transpose() * v / static_cast<double>(m);
    const double dev =
        (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    best_dev = std::min(best_dev, dev);
    if (dev > threshold) continue;

    out.m = static_cast<int>(m);
    out.rounds = round + 1;
    out.achieved_offdiag = dev;
    out.sample_points = pts;

    auto [lo, hi] = numkernel::sym_eig_extreme(gram, tol);
    out.cert.q = 2.0;
    out.cert.m = out.m;
    out.cert.n = n;
    out.cert.c1 = lo;
    out.cert.c2 = hi;
    out.cert.method = "eigen_exact";
    out.cert.seed = seed;
    out.cert.tol_feasibility = tol.feasibility;

    // Re-orthonormalize over the sampled domain so the emitted table is an
    // exactly orthonormal basis of the same span.
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success)
      throw NumericalFailure("monte_carlo_domain: sampled Gram not SPD");
    const Matrix lt = Matrix(llt.matrixL()).transpose();
    Matrix table =
        lt.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(v);
    Matrix index_col(m, 1);
    for (long long i = 0; i < m; ++i)
      index_col(i, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    out.system = OrthoSystem::tabulated(std::move(table),
                                        cube_points(std::move(index_col)),
                                        tol.feasibility);
    return out;
  }
  throw NumericalFailure(
      "monte_carlo_domain: entrywise Gram deviation stayed at " +
      std::to_string(best_dev) + " > " + std::to_string(threshold) +
      " after all rounds");
}

}  // namespace normgrid::sampling
