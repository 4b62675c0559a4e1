#include "normgrid/certify.hpp"

#include <cmath>
#include <limits>

#include "normgrid/numkernel.hpp"
#include "normgrid/parallel.hpp"
#include "normgrid/rng.hpp"

namespace normgrid::certify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DiscretizationCertificate certify_l2(const OrthoSystem& sys,
                                     const WeightedRule& rule,
                                     const Tolerances& tol) {
  if (rule.nodes.size() != rule.weights.size())
    throw std::invalid_argument("certify_l2: node/weight count mismatch");
  Matrix v = sys.eval_matrix(rule.nodes);
  Matrix gram = v.transpose() * rule.weights.asDiagonal() * v;
  auto [c1, c2] = numkernel::sym_eig_extreme(gram, tol);

  // Sanity: the mean eigenvalue is the weighted trace, which must land
  // inside the reported bracket.
  double mean = gram.trace() / static_cast<double>(sys.size());
  if (mean < c1 - 1e-9 * (1.0 + std::abs(mean)) ||
      mean > c2 + 1e-9 * (1.0 + std::abs(mean)))
    throw NumericalFailure("certify_l2: trace left the eigenvalue bracket");

  DiscretizationCertificate cert;
  cert.q = 2.0;
  cert.m = rule.size();
  cert.n = sys.size();
  cert.c1 = c1;
  cert.c2 = c2;
  cert.method = "eigen_exact";
  cert.tol_feasibility = tol.feasibility;
  return cert;
}

LinftyReport certify_linfty_at(const OrthoSystem& sys, const PointSet& nodes,
                               const PointSet& probes, const Tolerances& tol,
                               int threads) {
  const int n = sys.size();
  Matrix v = sys.eval_matrix(nodes);

  LinftyReport rep;
  rep.cert.q = kInf;
  rep.cert.m = nodes.size();
  rep.cert.n = n;
  rep.cert.method = "lp_grid";
  rep.cert.tol_feasibility = tol.feasibility;

  // If some nonzero element vanishes on all nodes, the node set is not
  // norming and no finite ratio exists.
  Eigen::ColPivHouseholderQR<Matrix> qr(v);
  qr.setThreshold(tol.rank);
  if (qr.rank() < n) {
    rep.bounded = false;
    rep.ratio = kInf;
    rep.cert.unbounded = true;
    rep.cert.ratio = kInf;
    rep.cert.c1 = 0.0;
    rep.cert.c2 = 1.0;
    return rep;
  }

  Vector values(probes.size());
  std::vector<char> bounded(static_cast<std::size_t>(probes.size()), 1);
  parallel_for(probes.size(), threads, [&](long i) {
    Vector a = sys.eval_all(probes.point(i));
    auto lp = numkernel::lp_chebyshev(v, a, tol);
    values[i] = lp.value;
    bounded[static_cast<std::size_t>(i)] = lp.bounded ? 1 : 0;
  });

  Index best = 0;
  bool all_bounded = true;
  for (Index i = 0; i < values.size(); ++i) {
    if (!bounded[static_cast<std::size_t>(i)]) all_bounded = false;
    if (values[i] > values[best]) best = i;
  }
  if (!all_bounded) {
    rep.bounded = false;
    rep.ratio = kInf;
    rep.cert.unbounded = true;
    rep.cert.ratio = kInf;
    rep.cert.c1 = 0.0;
    rep.cert.c2 = 1.0;
    return rep;
  }
  rep.ratio = values.size() ? values[best] : 0.0;
  rep.worst_point = probes.size() ? probes.point(best) : Vector();
  rep.cert.ratio = rep.ratio;
  rep.cert.c1 = rep.ratio > 0.0 ? 1.0 / rep.ratio : 0.0;
  rep.cert.c2 = 1.0;
  return rep;
}

LinftyReport certify_linfty(const OrthoSystem& sys, const PointSet& nodes,
                            int refgrid_oversample, const Tolerances& tol,
                            int threads) {
  return certify_linfty_at(sys, nodes, sys.reference_grid(refgrid_oversample),
                           tol, threads);
}

namespace {

// Discrete weighted L1 mean of |f| over the rule for coefficient vector c.
double rule_l1(const Matrix& node_vals, const Vector& w, const Vector& c) {
  return w.dot((node_vals * c).cwiseAbs());
}

}  // namespace

DiscretizationCertificate certify_l1(const OrthoSystem& sys,
                                     const WeightedRule& rule,
                                     int probe_budget, std::uint64_t seed,
                                     int grid_oversample) {
  const int n = sys.size();
  if (probe_budget < 1)
    throw std::invalid_argument("certify_l1: probe budget < 1");
  Matrix node_vals = sys.eval_matrix(rule.nodes);

  const bool torus = sys.kind() == OrthoSystem::Kind::torus_trig;
  Matrix domain_vals;
  if (!torus) domain_vals = sys.table_values();

  auto true_l1 = [&](const Vector& c) -> double {
    if (torus) return lq_norm_grid(sys.combine(c), 1.0, grid_oversample);
    return (domain_vals * c).cwiseAbs().mean();
  };
  auto ratio_of = [&](const Vector& c) -> double {
    double denom = true_l1(c);
    if (denom <= 0.0) return -1.0;  // skip degenerate probes
    return rule_l1(node_vals, rule.weights, c) / denom;
  };

  double lo = kInf, hi = 0.0;
  Vector lo_c, hi_c;
  auto consider = [&](const Vector& c) {
    double r = ratio_of(c);
    if (r < 0.0) return;
    if (r < lo) {
      lo = r;
      lo_c = c;
    }
    if (r > hi) {
      hi = r;
      hi_c = c;
    }
  };

  // Single-mode probes.
  for (int i = 0; i < n; ++i) consider(Vector::Unit(n, i));
  // Probes vanishing at one node each: they expose mass concentration.
  for (int j = 0; j < rule.size() && n >= 2; ++j) {
    Vector row = node_vals.row(j).transpose();
    int a = -1, b = -1;
    for (int i = 0; i < n && b < 0; ++i)
      if (std::abs(row[i]) > 1e-12) (a < 0 ? a : b) = i;
    if (b < 0) continue;
    Vector c = Vector::Zero(n);
    c[a] = row[b];
    c[b] = -row[a];
    consider(c);
  }
  // Random probes.
  SplitMix64 gen(seed);
  for (int t = 0; t < probe_budget; ++t) {
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = gen.normal();
    consider(c);
  }
  // Coordinate-descent refinement of both extremes.
  auto refine = [&](Vector c, bool maximize) {
    if (c.size() == 0) return;
    for (double step : {0.5, 0.25, 0.1, 0.05}) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
          for (double dir : {1.0, -1.0}) {
            Vector c2 = c;
            c2[i] += dir * step * std::max(1.0, c.cwiseAbs().maxCoeff());
            double r = ratio_of(c2);
            if (r < 0.0) continue;
            if ((maximize && r > hi) || (!maximize && r < lo)) {
              consider(c2);
              c = c2;
            }
          }
        }
      }
    }
  };
  refine(hi_c, true);
  refine(lo_c, false);

  DiscretizationCertificate cert;
  cert.q = 1.0;
  cert.m = rule.size();
  cert.n = n;
  cert.c1 = lo == kInf ? 0.0 : lo;
  cert.c2 = hi;
  cert.method = "empirical_probe";
  cert.empirical = true;
  cert.seed = seed;
  return cert;
}

double linfty_from_l2(const DiscretizationCertificate& l2_cert) {
  if (l2_cert.q != 2.0)
    throw std::invalid_argument("linfty_from_l2: needs a q = 2 certificate");
  if (l2_cert.c1 <= 0.0) return kInf;
  return std::sqrt(static_cast<double>(l2_cert.n) / l2_cert.c1);
}

RemezReport remez_check(const FrequencySet& space, double measure_fraction,
                        int trials, std::uint64_t seed, int oversample) {
  if (measure_fraction < 0.0 || measure_fraction >= 1.0)
    throw std::invalid_argument("remez_check: fraction must be in [0, 1)");
  if (trials < 1) throw std::invalid_argument("remez_check: trials < 1");
  OrthoSystem sys = OrthoSystem::torus_trig(space);
  PointSet grid = sys.reference_grid(oversample);
  Matrix vals = sys.eval_matrix(grid);
  const auto g = static_cast<std::size_t>(grid.size());
  const auto cut = static_cast<std::size_t>(measure_fraction * static_cast<double>(g));

  RemezReport rep;
  rep.trials = trials;
  rep.seed = seed;
  rep.measure_fraction = static_cast<double>(cut) / static_cast<double>(g);
  for (int t = 0; t < trials; ++t) {
    SplitMix64 gen = SplitMix64::derive(seed, static_cast<std::uint64_t>(t));
    Vector c(sys.size());
    for (int i = 0; i < sys.size(); ++i) c[i] = gen.normal();
    auto cells = gen.sample_without_replacement(g, cut);
    std::vector<char> removed(g, 0);
    for (auto i : cells) removed[i] = 1;
    Vector fv = vals * c;
    double full = 0.0, off = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      double av = std::abs(fv[static_cast<Index>(i)]);
      full = std::max(full, av);
      if (!removed[i]) off = std::max(off, av);
    }
    double ratio = off > 0.0 ? full / off : kInf;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

BernsteinReport bernstein_probe(std::int64_t n, int dim, int trials,
                                std::uint64_t seed, int oversample) {
  if (n < 2) throw std::invalid_argument("bernstein_probe: need N >= 2");
  if (dim < 1) throw std::invalid_argument("bernstein_probe: dim < 1");
  FrequencySet cross = build_hyperbolic(n, dim);
  const double denom_factor =
      static_cast<double>(n) *
      std::pow(std::log(static_cast<double>(n)), dim - 1);

  BernsteinReport rep;
  rep.n = n;
  rep.dim = dim;
  rep.trials = trials;
  rep.seed = seed;

  auto consider = [&](const TrigPolynomial& f) {
    double denom = denom_factor * lq_norm_grid(f, kInf, oversample);
    if (denom <= 0.0) return;
    double num = lq_norm_grid(f.mixed_derivative(), kInf, oversample);
    rep.c_hat = std::max(rep.c_hat, num / denom);
  };

  // Full-order single mode (all axes active so the mixed derivative sees
  // the whole order N): k = (N, 1, ..., 1). For d = 1 its ratio is exactly 1.
  {
    FrequencySet sup;
    sup.dim = dim;
    std::vector<std::int64_t> k(dim, 1);
    k[0] = n;
    sup.freqs = {k};
    consider(TrigPolynomial(sup, ComplexVector::Ones(1)));
  }
  for (int t = 0; t < trials; ++t)
    consider(TrigPolynomial::random_real(
        cross, SplitMix64::derive(seed, static_cast<std::uint64_t>(t)).next()));
  return rep;
}

}  // namespace normgrid::certify
