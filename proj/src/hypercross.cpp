#include "normgrid/hypercross.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "normgrid/certify.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/rng.hpp"
#include "normgrid/trig_polynomial.hpp"

namespace normgrid::hypercross {

std::pair<double, double> alpha_beta(int d) {
  if (d < 1) throw std::invalid_argument("alpha_beta: d >= 1 required");
  double alpha = 0.0;
  for (int j = 1; j <= d; ++j) alpha += 1.0 / j;
  return {alpha, static_cast<double>(d) - alpha};
}

PointSet build_vm(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("build_vm: m >= 1 required");
  return uniform_grid({m});
}

namespace {

// Smallest M with c0 * M^{-level} * n (log n)^{level-1} <= eps.
std::int64_t minimal_m(std::int64_t n, int level, double eps, double c0) {
  const double target =
      c0 * static_cast<double>(n) *
      std::pow(std::log(static_cast<double>(n)), level - 1) / eps;
  std::int64_t m = static_cast<std::int64_t>(
      std::ceil(std::pow(target, 1.0 / level)));
  if (m < 1) m = 1;
  auto ok = [&](std::int64_t cand) {
    return std::pow(static_cast<double>(cand), level) >= target;
  };
  while (!ok(m)) ++m;
  while (m > 1 && ok(m - 1)) --m;
  return m;
}

void sort_dedup_rows(Matrix& pts) {
  const Index rows = pts.rows();
  const Index cols = pts.cols();
  std::vector<Index> order(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) order[static_cast<std::size_t>(i)] = i;
  auto less = [&](Index a, Index b) {
    for (Index j = 0; j < cols; ++j) {
      if (pts(a, j) < pts(b, j)) return true;
      if (pts(a, j) > pts(b, j)) return false;
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  Matrix out(rows, cols);
  Index kept = 0;
  for (Index i = 0; i < rows; ++i) {
    const Index r = order[static_cast<std::size_t>(i)];
    if (kept > 0 && (pts.row(r).array() == out.row(kept - 1).array()).all())
      continue;
    out.row(kept++) = pts.row(r);
  }
  pts = out.topRows(kept);
}

}  // namespace

HypercrossSet build_w(const HypercrossParams& params) {
  if (params.n < 2) throw std::invalid_argument("build_w: n >= 2 required");
  if (params.d < 1) throw std::invalid_argument("build_w: d >= 1 required");
  if (!(params.eps > 0.0 && params.eps < 0.125))
    throw std::invalid_argument("build_w: eps must lie in (0, 1/8)");
  if (params.c0 <= 0.0)
    throw std::invalid_argument("build_w: c0 must be positive");

  HypercrossSet out;
  std::tie(out.alpha, out.beta) = alpha_beta(params.d);

  const std::int64_t base = static_cast<std::int64_t>(
      std::ceil(params.base_grid_factor * static_cast<double>(params.n)));
  Matrix level = uniform_grid({base}).points;  // W(n, 1)
  out.level_sizes.push_back(level.rows());

  for (int l = 2; l <= params.d; ++l) {
    const std::int64_t m = minimal_m(params.n, l, params.eps, params.c0);
    out.m_sequence.push_back(m);
    const Vector vm = build_vm(m).points.col(0);
    const Index prev_rows = level.rows();
    const Index total = static_cast<Index>(l) * static_cast<Index>(m) * prev_rows;
    if (total > (Index{1} << 26))
      throw std::invalid_argument("build_w: construction exceeds 2^26 points");
    Matrix next(total, l);
    Index row = 0;
    for (int slot = 0; slot < l; ++slot)
      for (std::int64_t a = 0; a < m; ++a)
        for (Index y = 0; y < prev_rows; ++y) {
          for (int j = 0, src = 0; j < l; ++j)
            next(row, j) = (j == slot) ? vm(a) : level(y, src++);
          ++row;
        }
    out.pre_dedup_sizes.push_back(row);
    sort_dedup_rows(next);
    level = std::move(next);
    out.level_sizes.push_back(level.rows());
  }

  out.points.dim = params.d;
  out.points.frame = PointSet::Frame::torus;
  out.points.points = std::move(level);
  return out;
}

VerifyWReport verify_w(std::int64_t n, int d, const PointSet& w,
                       int refgrid_oversample, int trials, std::uint64_t seed,
                       const Tolerances& tol, int threads) {
  if (w.dim != d) throw std::invalid_argument("verify_w: dimension mismatch");
  const FrequencySet cross = build_hyperbolic(n, d);
  const OrthoSystem sys = OrthoSystem::torus_trig(cross);

  VerifyWReport report;
  report.seed = seed;
  report.refgrid_oversample = refgrid_oversample;

  const PointSet refgrid = sys.reference_grid(refgrid_oversample);
  // Exact mode runs one Chebyshev LP per reference-grid point, each over all
  // of W; cap the total work so large planar instances fall back to probes.
  const bool lp_feasible =
      sys.size() <= 200 && w.size() <= 5000 &&
      static_cast<double>(refgrid.size()) * static_cast<double>(w.size()) <=
          1e5;
  if (lp_feasible) {
    report.method = "lp_grid";
    auto lin = certify::certify_linfty(sys, w, refgrid_oversample, tol, threads);
    report.bounded = lin.bounded;
    report.c_hat = lin.ratio;
    return report;
  }

  report.method = "probe";
  report.trials = trials;
  const Matrix grid_values = sys.eval_matrix(refgrid);
  const Matrix w_values = sys.eval_matrix(w);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    SplitMix64 gen = SplitMix64::derive(seed, static_cast<std::uint64_t>(t));
    Vector coeffs(sys.size());
    for (Index i = 0; i < coeffs.size(); ++i) coeffs(i) = gen.normal();
    const double sup_grid = (grid_values * coeffs).cwiseAbs().maxCoeff();
    const double sup_w = (w_values * coeffs).cwiseAbs().maxCoeff();
    if (sup_w <= 0.0) {
      report.bounded = false;
      report.c_hat = std::numeric_limits<double>::infinity();
      return report;
    }
    worst = std::max(worst, sup_grid / sup_w);
  }
  report.c_hat = worst;
  return report;
}

}  // namespace normgrid::hypercross
