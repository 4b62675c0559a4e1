#include "normgrid/universal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "normgrid/rng.hpp"

namespace normgrid::universal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_gap_1d(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  double best = 0.0;
  double prev = 0.0;
  for (double x : xs) {
    best = std::max(best, x - prev);
    prev = x;
  }
  return std::max(best, 1.0 - prev);
}

// Largest empty open rectangle in [0,1]^2 among points (x_i, y_i). For each
// bottom support (0 or a point ordinate) sweep points upward, maintaining the
// set of x-blockers strictly inside the vertical range; each swept point tops
// out the gap it falls into, and the surviving gaps reach the top face.
// Every candidate is a genuinely empty box and every maximal empty box is
// visited, so the maximum is exact.
double largest_empty_rect(const std::vector<double>& x,
                          const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return y[a] < y[b] || (y[a] == y[b] && x[a] < x[b]);
  });
  std::vector<double> bottoms;
  bottoms.reserve(n + 1);
  bottoms.push_back(0.0);
  bottoms.insert(bottoms.end(), y.begin(), y.end());
  std::sort(bottoms.begin(), bottoms.end());
  bottoms.erase(std::unique(bottoms.begin(), bottoms.end()), bottoms.end());

  double best = 0.0;
  for (double yb : bottoms) {
    if (1.0 - yb <= best) break;  // heights only shrink from here on
    std::set<double> blockers;
    std::size_t i = 0;
    while (i < n && y[order[i]] <= yb) ++i;
    while (i < n) {
      std::size_t j = i;
      const double level = y[order[i]];
      while (j < n && y[order[j]] == level) ++j;
      for (std::size_t p = i; p < j; ++p) {
        const double xp = x[order[p]];
        auto hi_it = blockers.upper_bound(xp);
        const double hi = (hi_it == blockers.end()) ? 1.0 : *hi_it;
        double lo = 0.0;
        if (hi_it != blockers.begin()) lo = *std::prev(hi_it);
        best = std::max(best, (hi - lo) * (level - yb));
      }
      for (std::size_t p = i; p < j; ++p) blockers.insert(x[order[p]]);
      i = j;
    }
    double prev = 0.0;
    for (double b : blockers) {
      best = std::max(best, (b - prev) * (1.0 - yb));
      prev = b;
    }
    best = std::max(best, (1.0 - prev) * (1.0 - yb));
  }
  return best;
}

double dispersion_rec(const Matrix& pts, int d) {
  const Index n = pts.rows();
  if (n == 0) return 1.0;
  if (d == 1) {
    std::vector<double> xs(pts.col(0).data(), pts.col(0).data() + n);
    return max_gap_1d(std::move(xs));
  }
  if (d == 2) {
    std::vector<double> xs(n), ys(n);
    for (Index i = 0; i < n; ++i) {
      xs[i] = pts(i, 0);
      ys[i] = pts(i, 1);
    }
    return largest_empty_rect(xs, ys);
  }
  // d >= 3: every maximal box has its first-axis extent supported by point
  // coordinates or the faces; recurse on the strict interior of each slab.
  std::vector<double> zs(pts.col(0).data(), pts.col(0).data() + n);
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  std::vector<double> lowers = {0.0};
  lowers.insert(lowers.end(), zs.begin(), zs.end());
  lowers.erase(std::unique(lowers.begin(), lowers.end()), lowers.end());
  std::vector<double> uppers = zs;
  uppers.push_back(1.0);
  uppers.erase(std::unique(uppers.begin(), uppers.end()), uppers.end());

  double best = 0.0;
  for (double zl : lowers) {
    for (double zr : uppers) {
      if (zr <= zl) continue;
      const double h = zr - zl;
      if (h <= best) continue;
      std::vector<Index> inside;
      for (Index i = 0; i < n; ++i) {
        if (pts(i, 0) > zl && pts(i, 0) < zr) inside.push_back(i);
      }
      Matrix sub(static_cast<Index>(inside.size()), d - 1);
      for (std::size_t r = 0; r < inside.size(); ++r) {
        sub.row(static_cast<Index>(r)) = pts.row(inside[r]).tail(d - 1);
      }
      best = std::max(best, h * dispersion_rec(sub, d - 1));
    }
  }
  return best;
}

void compositions_lex(int total, int parts, std::vector<std::int64_t>& cur,
                      const std::function<void(const std::vector<std::int64_t>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int s = 0; s <= total; ++s) {
    cur.push_back(s);
    compositions_lex(total - s, parts - 1, cur, emit);
    cur.pop_back();
  }
}

double binom_capped(std::int64_t p, std::int64_t v, double cap) {
  double b = 1.0;
  for (std::int64_t i = 1; i <= v; ++i) {
    b *= static_cast<double>(p - v + i) / static_cast<double>(i);
    if (b > cap) return cap * 2.0;
  }
  return b;
}

// Exact L2 constants of the equal-weight rule for the complex span
// {e^{i k.x} : k in member}: extreme eigenvalues of the Hermitian Gram
// (1/m) sum_j v(xi_j) v(xi_j)^*.  Works for non-symmetric supports where no
// real orthonormal basis of the span exists.
DiscretizationCertificate complex_gram_cert(const FrequencySet& member,
                                            const PointSet& pts) {
  const Index m = pts.size();
  const Index v = member.size();
  ComplexMatrix vm(m, v);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < v; ++k) {
      double phase = 0.0;
      for (int a = 0; a < member.dim; ++a) {
        phase += static_cast<double>(member.freqs[static_cast<std::size_t>(k)]
                                         [static_cast<std::size_t>(a)]) *
                 pts.points(j, a);
      }
      vm(j, k) = std::polar(1.0, phase);
    }
  }
  ComplexMatrix gram = (vm.adjoint() * vm) / static_cast<double>(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram,
                                                  Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("complex Gram eigensolve failed");
  }
  DiscretizationCertificate cert;
  cert.q = 2.0;
  cert.m = static_cast<int>(m);
  cert.n = static_cast<int>(v);
  cert.c1 = es.eigenvalues().minCoeff();
  cert.c2 = es.eigenvalues().maxCoeff();
  cert.method = "eigen_exact";
  return cert;
}

// Empirical L1 ratio range over random complex elements of the span.
DiscretizationCertificate complex_probe_l1(const FrequencySet& member,
                                           const PointSet& pts,
                                           int probe_budget,
                                           std::uint64_t seed, int oversample) {
  if (probe_budget < 1) {
    throw std::invalid_argument("complex L1 probe needs probe_budget >= 1");
  }
  const Index m = pts.size();
  double lo = kInf;
  double hi = 0.0;
  for (int p = 0; p < probe_budget; ++p) {
    TrigPolynomial f = TrigPolynomial::random_complex(
        member, SplitMix64::derive(seed, static_cast<std::uint64_t>(p)).next());
    const double denom = lq_norm_grid(f, 1.0, oversample);
    if (!(denom > 0.0)) continue;
    const ComplexVector vals = f.evaluate(pts);
    const double num = vals.cwiseAbs().sum() / static_cast<double>(m);
    const double ratio = num / denom;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!(hi > 0.0)) throw NumericalFailure("all L1 probes degenerate");
  DiscretizationCertificate cert;
  cert.q = 1.0;
  cert.m = static_cast<int>(m);
  cert.n = member.size();
  cert.c1 = lo;
  cert.c2 = hi;
  cert.method = "empirical_probe";
  cert.empirical = true;
  cert.seed = seed;
  return cert;
}

}  // namespace

double dispersion(const PointSet& t) {
  if (t.frame != PointSet::Frame::cube) {
    throw std::invalid_argument("dispersion expects unit-cube points");
  }
  if (t.dim < 1 || t.dim > 4) {
    throw std::invalid_argument("dispersion supports 1 <= dim <= 4");
  }
  if (t.size() > 10000) {
    throw std::invalid_argument("dispersion caps the point count at 1e4");
  }
  if (t.size() > 0 &&
      (t.points.minCoeff() < 0.0 || t.points.maxCoeff() >= 1.0)) {
    throw std::invalid_argument("dispersion points must lie in [0,1)^d");
  }
  return dispersion_rec(t.points, t.dim);
}

NetCheck verify_net(const PointSet& t, const NetParams& params) {
  if (t.frame != PointSet::Frame::cube) {
    throw std::invalid_argument("verify_net expects unit-cube points");
  }
  if (params.d < 1 || params.d != t.dim) {
    throw std::invalid_argument("verify_net: dimension mismatch");
  }
  if (params.r < 0 || params.r > 26 || params.t < 0 || params.t > params.r) {
    throw std::invalid_argument("verify_net requires 0 <= t <= r <= 26");
  }
  if (t.size() != (std::int64_t(1) << params.r)) {
    throw std::invalid_argument("verify_net: |T| must equal 2^r");
  }
  if (t.size() > 0 &&
      (t.points.minCoeff() < 0.0 || t.points.maxCoeff() >= 1.0)) {
    throw std::invalid_argument("verify_net points must lie in [0,1)^d");
  }
  const int s_total = params.r - params.t;
  const std::int64_t boxes = std::int64_t(1) << s_total;
  const std::int64_t expected = std::int64_t(1) << params.t;

  NetCheck check;
  std::vector<std::int64_t> cur;
  std::function<void(const std::vector<std::int64_t>&)> visit =
      [&](const std::vector<std::int64_t>& shape) {
        if (!check.ok) return;  // keep the lexicographically first violation
        std::vector<std::int64_t> counts(static_cast<std::size_t>(boxes), 0);
        for (Index i = 0; i < t.points.rows(); ++i) {
          std::int64_t idx = 0;
          for (int j = 0; j < params.d; ++j) {
            const std::int64_t side = std::int64_t(1) << shape[static_cast<std::size_t>(j)];
            auto cell = static_cast<std::int64_t>(
                std::floor(t.points(i, j) * static_cast<double>(side)));
            idx = idx * side + cell;
          }
          ++counts[static_cast<std::size_t>(idx)];
        }
        for (std::int64_t b = 0; b < boxes; ++b) {
          if (counts[static_cast<std::size_t>(b)] == expected) continue;
          check.ok = false;
          check.shape.assign(shape.begin(), shape.end());
          check.count = counts[static_cast<std::size_t>(b)];
          // decode the mixed-radix position, last axis fastest
          check.position.assign(static_cast<std::size_t>(params.d), 0);
          std::int64_t rem = b;
          for (int j = params.d - 1; j >= 0; --j) {
            const std::int64_t side = std::int64_t(1) << shape[static_cast<std::size_t>(j)];
            check.position[static_cast<std::size_t>(j)] = rem % side;
            rem /= side;
          }
          return;
        }
      };
  compositions_lex(s_total, params.d, cur, visit);
  if (check.ok) check.shape.clear();
  return check;
}

PointSet build_hammersley_net(int r, int d) {
  if (d != 2) {
    throw std::invalid_argument("build_hammersley_net is two-dimensional");
  }
  if (r < 0 || r > 24) {
    throw std::invalid_argument("build_hammersley_net requires 0 <= r <= 24");
  }
  const std::int64_t m = std::int64_t(1) << r;
  Matrix pts(m, 2);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::int64_t i = 0; i < m; ++i) {
    std::int64_t rev = 0;
    for (int b = 0; b < r; ++b) {
      rev = (rev << 1) | ((i >> b) & 1);
    }
    pts(i, 0) = static_cast<double>(i) * inv;
    pts(i, 1) = static_cast<double>(rev) * inv;
  }
  return cube_points(std::move(pts));
}

Collection build_collection_dyadic(int n, int d) {
  if (n < 0 || d < 1) {
    throw std::invalid_argument("build_collection_dyadic needs n >= 0, d >= 1");
  }
  if (n > 22 || d > 6) {
    throw std::invalid_argument("build_collection_dyadic: desk-scale caps n <= 22, d <= 6");
  }
  if (binom_capped(n + d - 1, d - 1, 1e5) > 1e5) {
    throw std::invalid_argument("build_collection_dyadic: too many members");
  }
  Collection col;
  col.kind = "dyadic";
  col.n = n;
  col.d = d;
  std::vector<std::int64_t> cur;
  compositions_lex(n, d, cur, [&](const std::vector<std::int64_t>& s) {
    col.members.push_back(build_dyadic_block(s));
  });
  return col;
}

UniversalReport certify_universal(const Collection& col, const PointSet& pts,
                                  double q, int probe_budget,
                                  std::uint64_t seed, int oversample,
                                  const Tolerances& tol, int threads) {
  if (col.members.empty()) {
    throw std::invalid_argument("certify_universal: empty collection");
  }
  if (pts.frame != PointSet::Frame::torus) {
    throw std::invalid_argument("certify_universal expects torus points");
  }
  const bool is_inf = std::isinf(q);
  if (!is_inf && q != 1.0 && q != 2.0) {
    throw std::invalid_argument("certify_universal supports q in {1, 2, inf}");
  }
  UniversalReport rep;
  rep.q = q;
  rep.m = pts.size();
  rep.seed = seed;
  rep.worst_c1 = kInf;
  rep.worst_c2 = 0.0;
  rep.worst_ratio = 0.0;

  for (std::size_t idx = 0; idx < col.members.size(); ++idx) {
    const FrequencySet& member = col.members[idx];
    MemberOutcome out;
    out.member = static_cast<int>(idx);
    try {
      const std::uint64_t sub_seed =
          SplitMix64::derive(seed, static_cast<std::uint64_t>(idx) + 1).next();
      if (member.is_symmetric()) {
        OrthoSystem sys = OrthoSystem::torus_trig(member);
        if (q == 2.0) {
          out.cert = certify::certify_l2(sys, WeightedRule::equal_weight(pts), tol);
          out.ok = out.cert.c1 > tol.rank;
          if (!out.ok) out.error = "rank-deficient on the node set";
        } else if (is_inf) {
          certify::LinftyReport lr =
              certify::certify_linfty(sys, pts, oversample, tol, threads);
          out.cert = lr.cert;
          out.ok = lr.bounded;
          if (!out.ok) out.error = "no finite sup-norm ratio on the node set";
        } else {
          out.cert = certify::certify_l1(sys, WeightedRule::equal_weight(pts),
                                         probe_budget, sub_seed, oversample);
          out.ok = out.cert.c1 > 0.0;
          if (!out.ok) out.error = "degenerate L1 probe ratio";
        }
      } else {
        if (q == 2.0) {
          out.cert = complex_gram_cert(member, pts);
          out.ok = out.cert.c1 > tol.rank;
          if (!out.ok) out.error = "rank-deficient on the node set";
        } else if (q == 1.0) {
          out.cert =
              complex_probe_l1(member, pts, probe_budget, sub_seed, oversample);
          out.ok = out.cert.c1 > 0.0;
          if (!out.ok) out.error = "degenerate L1 probe ratio";
        } else {
          throw std::invalid_argument(
              "sup-norm certification needs a symmetric member");
        }
      }
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
    if (out.ok) {
      if (out.cert.c1 < rep.worst_c1) {
        rep.worst_c1 = out.cert.c1;
        rep.argmin_member = static_cast<int>(idx);
      }
      rep.worst_c2 = std::max(rep.worst_c2, out.cert.c2);
      rep.worst_ratio = std::max(rep.worst_ratio, out.cert.ratio);
    } else {
      rep.failures.push_back(static_cast<int>(idx));
    }
    rep.outcomes.push_back(std::move(out));
  }
  if (!rep.failures.empty()) {
    rep.worst_c1 = 0.0;
    if (is_inf) rep.worst_ratio = kInf;
  } else if (!std::isfinite(rep.worst_c1)) {
    rep.worst_c1 = 0.0;
  }
  return rep;
}

SparseReport universal_random_for_sparse(int v, int n, int d, double q, int m,
                                         std::uint64_t seed, int sample_count,
                                         int probe_budget,
                                         const Tolerances& tol) {
  if (v < 1 || n < 1 || d < 1 || m < 1) {
    throw std::invalid_argument("universal_random_for_sparse: bad sizes");
  }
  if (q != 1.0 && q != 2.0) {
    throw std::invalid_argument("universal_random_for_sparse supports q in {1, 2}");
  }
  if (n > 20 || d > 4) {
    throw std::invalid_argument("universal_random_for_sparse: desk-scale caps n <= 20, d <= 4");
  }
  const std::int64_t per_axis = (std::int64_t(1) << (n - 1)) - 1;
  FrequencySet box = build_box(std::vector<std::int64_t>(static_cast<std::size_t>(d), per_axis));
  const std::int64_t population = box.size();
  if (v > population) {
    throw std::invalid_argument("universal_random_for_sparse: v exceeds the box size");
  }

  SparseReport rep;
  rep.v = v;
  rep.n = n;
  rep.d = d;
  rep.q = q;
  rep.m = m;
  rep.seed = seed;
  rep.enumerated = binom_capped(population, v, 1e5) <= 1e5;
  rep.theory_m = (q == 2.0)
                     ? static_cast<double>(v) * v * n
                     : static_cast<double>(v) * v * std::pow(n, 4.5);

  const PointSet pts =
      random_torus(m, d, SplitMix64::derive(seed, 0).next());

  double min_c1 = kInf;
  double max_c2 = 0.0;
  int checked = 0;
  int failures = 0;
  auto run_member = [&](const std::vector<Index>& pick) {
    std::vector<std::vector<std::int64_t>> freqs;
    freqs.reserve(pick.size());
    for (Index i : pick) {
      freqs.push_back(box.freqs[static_cast<std::size_t>(i)]);
    }
    FrequencySet member = build_explicit(d, std::move(freqs));
    DiscretizationCertificate cert;
    if (q == 2.0) {
      cert = complex_gram_cert(member, pts);
    } else {
      const std::uint64_t sub_seed =
          SplitMix64::derive(seed, static_cast<std::uint64_t>(checked) + 1).next();
      cert = complex_probe_l1(member, pts, probe_budget, sub_seed, 8);
    }
    min_c1 = std::min(min_c1, cert.c1);
    max_c2 = std::max(max_c2, cert.c2);
    if (!(cert.c1 > tol.rank)) ++failures;
    ++checked;
  };

  if (rep.enumerated) {
    std::vector<Index> pick(static_cast<std::size_t>(v));
    for (int i = 0; i < v; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      run_member(pick);
      int j = v - 1;
      while (j >= 0 && pick[static_cast<std::size_t>(j)] ==
                           population - v + j) {
        --j;
      }
      if (j < 0) break;
      ++pick[static_cast<std::size_t>(j)];
      for (int a = j + 1; a < v; ++a) {
        pick[static_cast<std::size_t>(a)] = pick[static_cast<std::size_t>(a - 1)] + 1;
      }
    }
  } else {
    if (sample_count < 1) {
      throw std::invalid_argument("universal_random_for_sparse: sample_count >= 1");
    }
    for (int s = 0; s < sample_count; ++s) {
      SplitMix64 g = SplitMix64::derive(seed, 1000 + static_cast<std::uint64_t>(s));
      std::vector<std::size_t> draw = g.sample_without_replacement(
          static_cast<std::size_t>(population), static_cast<std::size_t>(v));
      std::vector<Index> pick(draw.begin(), draw.end());
      run_member(pick);
    }
  }

  rep.members_checked = checked;
  rep.min_c1 = std::isfinite(min_c1) ? min_c1 : 0.0;
  rep.max_c2 = max_c2;
  rep.failure_fraction =
      checked > 0 ? static_cast<double>(failures) / checked : 0.0;
  return rep;
}

DispersionUniversalReport dispersion_implies_universal_check(
    const PointSet& t, double threshold, const Tolerances& tol, int threads) {
  if (t.frame != PointSet::Frame::cube || t.dim != 2) {
    throw std::invalid_argument(
        "dispersion_implies_universal_check expects cube points, d = 2");
  }
  const int m = t.size();
  if (m < 2 || (m & (m - 1)) != 0) {
    throw std::invalid_argument("|T| must be a power of two >= 2");
  }
  int r = 0;
  while ((1 << r) < m) ++r;
  if (r > 12) {
    throw std::invalid_argument("desk-scale cap r <= 12");
  }
  DispersionUniversalReport rep;
  rep.r = r;
  rep.threshold = threshold;
  rep.dispersion_value = dispersion(t);
  const PointSet nodes = scale_to_torus(t);
  for (int c = 0; c <= 3; ++c) {
    const int n = r - c;
    if (n < 1) {
      rep.ratios.push_back(kInf);
      continue;
    }
    Collection col = build_collection_dyadic(n, 2);
    UniversalReport ur = certify_universal(col, nodes, kInf, 0, 0,
                                           /*oversample=*/2, tol, threads);
    const double ratio = ur.failures.empty() ? ur.worst_ratio : kInf;
    rep.ratios.push_back(ratio);
    if (rep.smallest_c < 0 && std::isfinite(ratio) && ratio <= threshold) {
      rep.smallest_c = c;
    }
  }
  return rep;
}

InverseDispersionReport universal_implies_dispersion_check(const PointSet& t,
                                                           int n) {
  if (n < 0 || n > 40) {
    throw std::invalid_argument("universal_implies_dispersion_check: 0 <= n <= 40");
  }
  InverseDispersionReport rep;
  rep.n = n;
  rep.dispersion_value = dispersion(t);
  rep.fitted_c = rep.dispersion_value * std::pow(2.0, n);
  return rep;
}

}  // namespace normgrid::universal
