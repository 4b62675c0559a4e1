#include "normgrid/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace normgrid::numkernel {

double det_lu(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("det_lu: matrix not square");
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

std::pair<double, double> sym_eig_extreme(const Matrix& a,
                                          const Tolerances& tol) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("sym_eig_extreme: matrix not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale)
    throw NumericalFailure("sym_eig_extreme: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("sym_eig_extreme: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iter,
                const Tolerances& tol) {
  const Index n = a.cols();
  if (a.rows() != b.size()) throw std::invalid_argument("nnls: size mismatch");
  if (max_iter <= 0) max_iter = 3 * static_cast<int>(n);

  NnlsResult res;
  res.x = Vector::Zero(n);
  std::vector<bool> passive(n, false);
  std::vector<Index> pset;

  const double grad_scale = std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());
  const double kkt_tol = tol.feasibility * grad_scale;

  Vector w = a.transpose() * (b - a * res.x);
  int outer = 0;
  while (outer < max_iter) {
    // pick the most violated sign constraint outside the passive set
    Index best = -1;
    double best_w = kkt_tol;
    for (Index j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) break;
    ++outer;
    passive[best] = true;
    pset.push_back(best);

    // inner loop: restrict to the passive set, clip negativities
    while (true) {
      Matrix ap(a.rows(), static_cast<Index>(pset.size()));
      for (std::size_t k = 0; k < pset.size(); ++k) ap.col(k) = a.col(pset[k]);
      Vector z = ap.colPivHouseholderQr().solve(b);
      bool all_pos = true;
      for (Index k = 0; k < z.size(); ++k)
        if (z[k] <= 0.0) all_pos = false;
      if (all_pos) {
        for (std::size_t k = 0; k < pset.size(); ++k) res.x[pset[k]] = z[k];
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pset.size(); ++k)
        if (z[static_cast<Index>(k)] <= 0.0) {
          double xk = res.x[pset[k]];
          alpha = std::min(alpha, xk / (xk - z[static_cast<Index>(k)]));
        }
      for (std::size_t k = 0; k < pset.size(); ++k) {
        double& xk = res.x[pset[k]];
        xk += alpha * (z[static_cast<Index>(k)] - xk);
      }
      // retire zeroed coordinates
      std::vector<Index> keep;
      for (auto j : pset) {
        if (res.x[j] > 1e-14 * grad_scale) {
          keep.push_back(j);
        } else {
          res.x[j] = 0.0;
          passive[j] = false;
        }
      }
      pset = std::move(keep);
      if (pset.empty()) break;
    }
    w = a.transpose() * (b - a * res.x);
  }

  Vector grad = a.transpose() * (b - a * res.x);
  double kkt = 0.0;
  for (Index j = 0; j < n; ++j)
    kkt = std::max(kkt, passive[j] ? std::abs(grad[j]) : std::max(0.0, grad[j]));
  res.kkt_residual = kkt;
  res.residual_norm = (a * res.x - b).norm();
  res.iterations = outer;
  res.converged = kkt <= kkt_tol || outer < max_iter;
  return res;
}

namespace {

constexpr int kStallWindow = 64;
constexpr long kRefreshEvery = 256;

struct Tableau {
  Matrix t;                  // rows x (cols + 1); last column is the rhs
  std::vector<Index> basis;  // basis[i] = column basic in row i
  Index rows, cols;

  double rhs(Index i) const { return t(i, cols); }

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Original (equilibrated) problem data needed to rebuild the tableau from
// scratch against the current basis. `localrow` maps the artificial column
// j = n + r to the tableau row currently holding original row r (-1 if that
// row was dropped as redundant).
struct RefreshContext {
  const Matrix* aw = nullptr;  // structural columns, one row per tableau row
  const Vector* bw = nullptr;  // rhs (perturbed), one entry per tableau row
  Vector cost;                 // phase cost over every tableau column
  std::vector<Index> localrow;
};

// Re-derive all tableau rows and the objective row from the basis with a
// fresh factorization. Accumulated pivot round-off is the dominant failure
// mode of a long dense-tableau run; periodic rebuilds bound that drift.
void refresh_tableau(Tableau& tb, const RefreshContext& ctx) {
  const Index m = tb.rows;
  if (m == 0 || ctx.aw == nullptr) return;
  const Index n = ctx.aw->cols();
  auto unit_row = [&](Index art) -> Index {
    return ctx.localrow[static_cast<std::size_t>(art)];
  };
  Matrix bmat(m, m);
  for (Index i = 0; i < m; ++i) {
    const Index bj = tb.basis[static_cast<std::size_t>(i)];
    for (Index k = 0; k < m; ++k)
      bmat(k, i) = bj < n ? (*ctx.aw)(k, bj)
                          : (k == unit_row(bj - n) ? 1.0 : 0.0);
  }
  Eigen::PartialPivLU<Matrix> lu(bmat);
  Matrix full(m, tb.cols + 1);
  full.leftCols(n) = *ctx.aw;
  full.middleCols(n, tb.cols - n).setZero();
  for (Index j = n; j < tb.cols; ++j) {
    const Index r = unit_row(j - n);
    if (r >= 0) full(r, j) = 1.0;
  }
  full.col(tb.cols) = *ctx.bw;
  const Matrix fresh = lu.solve(full);
  tb.t.topRows(m) = fresh;
  Vector costb(m);
  for (Index i = 0; i < m; ++i)
    costb[i] = ctx.cost[tb.basis[static_cast<std::size_t>(i)]];
  tb.t.row(m).head(tb.cols) =
      ctx.cost.transpose() - costb.transpose() * fresh.leftCols(tb.cols);
  tb.t(m, tb.cols) = -costb.dot(fresh.col(tb.cols));
}

// One simplex phase on rows [0, rows) with objective in the last tableau row.
// allowed(j) gates entering columns. Returns optimal or unbounded.
LpStatus run_phase(Tableau& tb, const std::vector<char>& allowed,
                   const Tolerances& tol, long iter_cap,
                   const RefreshContext& ctx) {
  const Index obj = tb.rows;
  bool bland = false;
  int stall = 0;
  double last_obj = tb.t(obj, tb.cols);
  for (long iter = 0; iter < iter_cap; ++iter) {
    if (iter > 0 && iter % kRefreshEvery == 0) {
      refresh_tableau(tb, ctx);
      last_obj = tb.t(obj, tb.cols);
    }
    // entering column
    Index enter = -1;
    if (!bland) {
      double best = -tol.reduced_cost;
      for (Index j = 0; j < tb.cols; ++j)
        if (allowed[static_cast<std::size_t>(j)] && tb.t(obj, j) < best) {
          best = tb.t(obj, j);
          enter = j;
        }
    } else {
      for (Index j = 0; j < tb.cols; ++j)
        if (allowed[static_cast<std::size_t>(j)] &&
            tb.t(obj, j) < -tol.reduced_cost) {
          enter = j;
          break;
        }
    }
    if (enter < 0) return LpStatus::optimal;

    // Leaving row by a two-pass ratio test: pass 1 finds the minimum ratio
    // relaxed by a small feasibility slack; pass 2 takes the largest pivot
    // element among rows inside the relaxed window. Tiny pivots are what
    // blow a dense tableau up, so stability outranks the exact minimum; the
    // slack bounds the feasibility debt and refreshes repay it. Negative rhs
    // can only be round-off dust and is treated as zero.
    const double slack = tol.feasibility * 1e-2;
    double theta = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < tb.rows; ++i) {
      const double aij = tb.t(i, enter);
      if (aij > tol.pivot)
        theta = std::min(theta, (std::max(0.0, tb.rhs(i)) + slack) / aij);
    }
    if (!std::isfinite(theta)) return LpStatus::unbounded;
    Index leave = -1;
    double best_piv = 0.0;
    for (Index i = 0; i < tb.rows; ++i) {
      const double aij = tb.t(i, enter);
      if (aij > tol.pivot && std::max(0.0, tb.rhs(i)) / aij <= theta &&
          aij > best_piv) {
        best_piv = aij;
        leave = i;
      }
    }
    if (leave < 0) return LpStatus::unbounded;
    tb.pivot(leave, enter);

    // The objective cell holds -z; minimizing z makes it increase.
    double cur = tb.t(obj, tb.cols);
    if (cur > last_obj + 1e-15 * (1.0 + std::abs(last_obj))) {
      stall = 0;
      last_obj = cur;
    } else if (++stall >= kStallWindow) {
      bland = true;  // lowest-index entering resists degenerate churn
    }
  }
  throw NumericalFailure("simplex: iteration cap exceeded");
}

}  // namespace

SimplexResult simplex_solve(const Matrix& a, const Vector& b, const Vector& c,
                            const Tolerances& tol) {
  const Index m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("simplex_solve: size mismatch");
  if (n == 0) throw std::invalid_argument("simplex_solve: no variables");

  // Row equilibration (solution-preserving), and b >= 0 normalization.
  Matrix aw = a;
  Vector bw = b;
  for (Index i = 0; i < m; ++i) {
    double s = std::max(aw.row(i).cwiseAbs().maxCoeff(), std::abs(bw[i]));
    if (s > 0.0) {
      aw.row(i) /= s;
      bw[i] /= s;
    }
    if (bw[i] < 0.0) {
      aw.row(i) = -aw.row(i);
      bw[i] = -bw[i];
    }
  }

  // Anti-cycling: distinct tiny offsets on the rhs break primal degeneracy,
  // so min-ratio ties (the cycling fuel) almost never occur. The bias is
  // removed after phase 2 by re-solving the final basis against the
  // unperturbed rhs; reduced costs do not depend on b, so dual feasibility
  // of that basis carries over exactly.
  const Vector bw_exact = bw;
  constexpr double kPerturb = 1e-11;
  for (Index i = 0; i < m; ++i)
    bw[i] += kPerturb * (1.0 + static_cast<double>(i) /
                                   static_cast<double>(std::max<Index>(m, 2)));

  // Tableau with artificial columns [n, n+m) and objective row at the bottom.
  Tableau tb;
  tb.rows = m;
  tb.cols = n + m;
  tb.t = Matrix::Zero(m + 1, tb.cols + 1);
  tb.t.block(0, 0, m, n) = aw;
  tb.t.block(0, n, m, m) = Matrix::Identity(m, m);
  tb.t.col(tb.cols).head(m) = bw;
  tb.basis.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) tb.basis[static_cast<std::size_t>(i)] = n + i;

  // Phase 1: minimize the artificial sum. Reduced costs: -(column sums).
  for (Index j = 0; j <= tb.cols; ++j)
    tb.t(m, j) = (j >= n && j < tb.cols) ? 0.0 : -tb.t.col(j).head(m).sum();

  RefreshContext ctx1;
  ctx1.aw = &aw;
  ctx1.bw = &bw;
  ctx1.cost = Vector::Zero(tb.cols);
  ctx1.cost.segment(n, m).setOnes();
  ctx1.localrow.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) ctx1.localrow[static_cast<std::size_t>(i)] = i;

  std::vector<char> allowed(static_cast<std::size_t>(tb.cols), 1);
  LpStatus st = run_phase(tb, allowed, tol, 4000 + 60L * (m + n), ctx1);
  if (st == LpStatus::unbounded)
    throw NumericalFailure("simplex: phase 1 unbounded");
  if (-tb.t(m, tb.cols) > tol.feasibility * (1.0 + bw.lpNorm<Eigen::Infinity>()))
    return {LpStatus::infeasible, 0.0, Vector()};

  // Drive basic artificials out on the largest structural pivot in their row
  // (a small pivot here poisons every later phase-2 update); rows with no
  // usable pivot are redundant and dropped.
  std::vector<Index> kept(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) kept[static_cast<std::size_t>(i)] = i;
  std::vector<Index> drop;
  for (Index i = 0; i < m; ++i) {
    if (tb.basis[static_cast<std::size_t>(i)] < n) continue;
    Index piv = -1;
    double best = tol.pivot;
    for (Index j = 0; j < n; ++j)
      if (std::abs(tb.t(i, j)) > best) {
        best = std::abs(tb.t(i, j));
        piv = j;
      }
    if (piv >= 0)
      tb.pivot(i, piv);
    else
      drop.push_back(i);
  }
  if (!drop.empty()) {
    Matrix t2(tb.t.rows() - static_cast<Index>(drop.size()), tb.t.cols());
    std::vector<Index> basis2, kept2;
    Index r = 0;
    for (Index i = 0; i < m; ++i) {
      if (std::find(drop.begin(), drop.end(), i) != drop.end()) continue;
      t2.row(r++) = tb.t.row(i);
      basis2.push_back(tb.basis[static_cast<std::size_t>(i)]);
      kept2.push_back(i);
    }
    t2.row(r) = tb.t.row(m);
    tb.t = std::move(t2);
    tb.basis = std::move(basis2);
    kept = std::move(kept2);
    tb.rows = r;
  }

  // Phase 2: real objective, artificial columns locked out.
  const Index m2 = tb.rows;
  for (Index j = 0; j < tb.cols; ++j)
    tb.t(m2, j) = (j < n) ? c[j] : 0.0;
  tb.t(m2, tb.cols) = 0.0;
  for (Index i = 0; i < m2; ++i) {
    Index bj = tb.basis[static_cast<std::size_t>(i)];
    double cb = (bj < n) ? c[bj] : 0.0;
    if (cb != 0.0) tb.t.row(m2) -= cb * tb.t.row(i);
  }
  for (Index j = n; j < tb.cols; ++j) allowed[static_cast<std::size_t>(j)] = 0;

  Matrix aw2(m2, n);
  Vector bw2(m2);
  RefreshContext ctx2;
  ctx2.localrow.assign(static_cast<std::size_t>(m), -1);
  for (Index i = 0; i < m2; ++i) {
    aw2.row(i) = aw.row(kept[static_cast<std::size_t>(i)]);
    bw2[i] = bw[kept[static_cast<std::size_t>(i)]];
    ctx2.localrow[static_cast<std::size_t>(kept[static_cast<std::size_t>(i)])] =
        i;
  }
  ctx2.aw = &aw2;
  ctx2.bw = &bw2;
  ctx2.cost = Vector::Zero(tb.cols);
  ctx2.cost.head(n) = c;

  st = run_phase(tb, allowed, tol, 4000 + 60L * (m + n), ctx2);
  if (st == LpStatus::unbounded) return {LpStatus::unbounded, 0.0, Vector()};

  SimplexResult out;
  out.status = LpStatus::optimal;
  out.x = Vector::Zero(n);
  if (m2 > 0) {
    // Re-solve the final basis against the unperturbed rhs: this removes the
    // anti-cycling offsets exactly instead of leaving them in the solution.
    Matrix bmat(m2, m2);
    Vector brhs(m2);
    for (Index i = 0; i < m2; ++i) {
      brhs[i] = bw_exact[kept[static_cast<std::size_t>(i)]];
      const Index bj = tb.basis[static_cast<std::size_t>(i)];
      for (Index k = 0; k < m2; ++k) {
        const Index row = kept[static_cast<std::size_t>(k)];
        bmat(k, i) = bj < n ? aw(row, bj) : (row == bj - n ? 1.0 : 0.0);
      }
    }
    Vector xb = bmat.colPivHouseholderQr().solve(brhs);
    for (Index i = 0; i < m2; ++i) {
      Index bj = tb.basis[static_cast<std::size_t>(i)];
      if (bj < n) out.x[bj] = xb[i];
    }
  }
  out.objective = c.dot(out.x);
  return out;
}

LpValue lp_chebyshev(const Matrix& v, const Vector& a, const Tolerances& tol) {
  const Index m = v.rows(), n = v.cols();
  if (a.size() != n) throw std::invalid_argument("lp_chebyshev: size mismatch");
  if (m > 5000) throw std::invalid_argument("lp_chebyshev: too many constraints");
  if (n > 200) throw std::invalid_argument("lp_chebyshev: dimension too large");

  LpValue out;
  const double a_scale = a.cwiseAbs().maxCoeff();
  if (a_scale == 0.0) {
    out.value = 0.0;
    return out;
  }

  // Boundedness: the objective must lie in the row space of V; otherwise the
  // least-squares residual r of V^T y = a is a certified ray (V r = 0 by the
  // normal equations, a.r = ||r||^2 > 0).
  Vector y = v.transpose().colPivHouseholderQr().solve(a);
  Vector r = a - v.transpose() * y;
  if (r.norm() > tol.rank * std::max(1.0, a.norm())) {
    out.bounded = false;
    out.ray = r;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }

  // L1 dual: min sum(y+ + y-) s.t. V^T y+ - V^T y- = a.
  Matrix ad(n, 2 * m);
  ad.block(0, 0, n, m) = v.transpose();
  ad.block(0, m, n, m) = -v.transpose();
  Vector cost = Vector::Ones(2 * m);
  SimplexResult sr = simplex_solve(ad, a, cost, tol);
  if (sr.status != LpStatus::optimal)
    throw NumericalFailure("lp_chebyshev: dual solve failed");
  out.value = sr.objective;
  return out;
}

double weighted_dual_norm(const Vector& lambda, const Vector& mu,
                          double p_dual) {
  if (lambda.size() != mu.size())
    throw std::invalid_argument("weighted_dual_norm: size mismatch");
  if (std::isinf(p_dual))
    return (lambda.cwiseQuotient(mu)).cwiseAbs().maxCoeff();
  if (p_dual == 1.0) return lambda.cwiseAbs().sum();
  if (p_dual == 2.0)
    return std::sqrt(lambda.cwiseAbs2().cwiseQuotient(mu).sum());
  throw std::invalid_argument("weighted_dual_norm: p_dual must be 1, 2 or inf");
}

Vector min_weighted_norm_solution(const Matrix& a, const Vector& b,
                                  const Vector& mu, double p_dual,
                                  const Tolerances& tol) {
  const Index rows = a.rows(), w = a.cols();
  if (b.size() != rows || mu.size() != w)
    throw std::invalid_argument("min_weighted_norm_solution: size mismatch");
  for (Index i = 0; i < w; ++i)
    if (!(mu[i] > 0.0))
      throw std::invalid_argument("min_weighted_norm_solution: mu must be > 0");

  // Consistency of A lambda = b.
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  Vector ls = cod.solve(b);
  if ((a * ls - b).norm() > tol.feasibility * std::max(1.0, b.norm()))
    throw Infeasible("min_weighted_norm_solution: system inconsistent");

  if (p_dual == 2.0) {
    // Substitute lambda = sqrt(mu) z; minimum ||z|| solution via COD.
    Matrix bscaled = a * mu.cwiseSqrt().asDiagonal();
    Eigen::CompleteOrthogonalDecomposition<Matrix> codw(bscaled);
    Vector z = codw.solve(b);
    return mu.cwiseSqrt().cwiseProduct(z);
  }

  if (p_dual == 1.0) {
    Matrix as(rows, 2 * w);
    as.block(0, 0, rows, w) = a;
    as.block(0, w, rows, w) = -a;
    SimplexResult sr = simplex_solve(as, b, Vector::Ones(2 * w), tol);
    if (sr.status != LpStatus::optimal)
      throw NumericalFailure("min_weighted_norm_solution: LP failed");
    return sr.x.head(w) - sr.x.tail(w);
  }

  if (std::isinf(p_dual)) {
    // Variables [z+ (w), z- (w), s (w), t]: A mu (z+ - z-) = b and
    // z+_i + z-_i + s_i - t = 0; minimize t. Then lambda = mu (z+ - z-).
    const Index nv = 3 * w + 1;
    Matrix as = Matrix::Zero(rows + w, nv);
    Vector bs = Vector::Zero(rows + w);
    Matrix amu = a * mu.asDiagonal();
    as.block(0, 0, rows, w) = amu;
    as.block(0, w, rows, w) = -amu;
    bs.head(rows) = b;
    for (Index i = 0; i < w; ++i) {
      as(rows + i, i) = 1.0;
      as(rows + i, w + i) = 1.0;
      as(rows + i, 2 * w + i) = 1.0;
      as(rows + i, 3 * w) = -1.0;
    }
    Vector cost = Vector::Zero(nv);
    cost[3 * w] = 1.0;
    SimplexResult sr = simplex_solve(as, bs, cost, tol);
    if (sr.status != LpStatus::optimal)
      throw NumericalFailure("min_weighted_norm_solution: LP failed");
    return mu.cwiseProduct(sr.x.head(w) - sr.x.segment(w, w));
  }

  throw std::invalid_argument(
      "min_weighted_norm_solution: p_dual must be 1, 2 or inf");
}

}  // namespace normgrid::numkernel
