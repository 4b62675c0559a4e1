#include "normgrid/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace normgrid::greedy {

namespace {

constexpr Index kCandidateCap = 100000;

// Packed symmetric coordinates: upper triangle (i <= j), index
// j(j+1)/2 + i, off-diagonal entries scaled by sqrt(2) so the packed dot
// product equals the Frobenius inner product exactly.
Index packed_dim(Index n) { return n * (n + 1) / 2; }

Vector pack_sym(const Matrix& s) {
  const Index n = s.rows();
  const double r2 = std::sqrt(2.0);
  Vector v(packed_dim(n));
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i)
      v(j * (j + 1) / 2 + i) = i == j ? s(i, j) : r2 * s(i, j);
  return v;
}

Matrix unpack_sym(const Vector& v, Index n) {
  const double r2 = std::sqrt(2.0);
  Matrix s(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) {
      const double e = v(j * (j + 1) / 2 + i);
      if (i == j) {
        s(i, j) = e;
      } else {
        s(i, j) = e / r2;
        s(j, i) = e / r2;
      }
    }
  return s;
}

// scores_c = u(x_c)^T R u(x_c) for all candidates, via two dense products.
Vector quadratic_scores(const Matrix& values, const Matrix& r) {
  return ((values * r).array() * values.array()).rowwise().sum();
}

}  // namespace

Matrix gram_atom(const OrthoSystem& sys, const Vector& x) {
  const Vector u = sys.eval_all(x);
  return u * u.transpose();
}

OgaResult oga_exact_l2(const OrthoSystem& sys, const PointSet& candidates,
                       int max_iter, double target_residual, double weakness,
                       const Tolerances& tol) {
  const Index n = sys.size();
  const Index cand = candidates.points.rows();
  if (cand == 0) throw std::invalid_argument("oga: empty candidate set");
  if (cand > kCandidateCap)
    throw std::invalid_argument("oga: candidate cap is 1e5 points");
  if (weakness <= 0.0 || weakness > 1.0)
    throw std::invalid_argument("oga: weakness must be in (0, 1]");
  const Index dim = packed_dim(n);
  const int cap = max_iter > 0 ? max_iter : static_cast<int>(dim);

  const Matrix values = sys.eval_matrix(candidates);  // cand x n
  const Vector b = pack_sym(Matrix::Identity(n, n));

  // Incrementally orthonormalized selected atoms (twice-reorthogonalized
  // Gram-Schmidt); `raw` keeps the unorthogonalized columns for the final
  // projection solve.
  Matrix q(dim, cap);
  Matrix raw(dim, cap);
  Vector resid = b;  // b minus its projection onto the selected span
  std::vector<char> used(static_cast<std::size_t>(cand), 0);

  OgaResult out;
  int k = 0;
  while (k < cap) {
    const double rnorm = resid.norm();
    if (rnorm <= target_residual) break;

    const Matrix r_mat = unpack_sym(resid, n);
    const Vector scores = quadratic_scores(values, r_mat).cwiseAbs();
    double best = -1.0;
    Index best_idx = -1;
    for (Index c = 0; c < cand; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      if (scores(c) > best) {
        best = scores(c);
        best_idx = c;
      }
    }
    if (weakness < 1.0 && best_idx >= 0) {
      // Weak variant: earliest candidate within `weakness` of the maximum.
      for (Index c = 0; c < cand; ++c) {
        if (!used[static_cast<std::size_t>(c)] && scores(c) >= weakness * best) {
          best_idx = c;
          break;
        }
      }
    }
    if (best_idx < 0 || best <= tol.rank * std::max(1.0, rnorm))
      throw SpanDeficiency(
          k + 1, "oga: residual stagnated at " + std::to_string(rnorm) +
                     "; candidates do not span the identity");

    const Vector u = values.row(best_idx).transpose();
    Vector atom = pack_sym(u * u.transpose());
    raw.col(k) = atom;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < k; ++j) atom -= q.col(j).dot(atom) * q.col(j);
    const double anorm = atom.norm();
    if (anorm <= 1e-13 * u.squaredNorm()) {
      // Selected atom is numerically inside the span already; treat as
      // stagnation (its residual inner product should have been ~0).
      throw SpanDeficiency(
          k + 1, "oga: best atom is dependent on the selected span while the "
                 "residual is " + std::to_string(rnorm));
    }
    q.col(k) = atom / anorm;
    resid -= q.col(k).dot(resid) * q.col(k);
    used[static_cast<std::size_t>(best_idx)] = 1;
    out.trace.selected.push_back(best_idx);
    out.trace.residual_norms.push_back(resid.norm());
    ++k;
  }

  out.iterations = k;
  // Authoritative weights: exact projection of I onto the selected atoms.
  Vector lambda =
      raw.leftCols(k).completeOrthogonalDecomposition().solve(b);
  std::vector<Index> order(out.trace.selected);
  std::vector<std::size_t> perm(order.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t bb) {
    return order[a] < order[bb];
  });
  std::vector<Index> rows;
  Vector weights(k);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    rows.push_back(order[perm[i]]);
    weights(static_cast<Index>(i)) = lambda(static_cast<Index>(perm[i]));
  }
  out.rule.nodes = select_rows(candidates, rows);
  out.rule.weights = weights;
  out.rule.tags = {"oga"};

  const Matrix vsel = sys.eval_matrix(out.rule.nodes);
  const Matrix delta = Matrix::Identity(n, n) -
                       vsel.transpose() * weights.asDiagonal() * vsel;
  out.final_residual = delta.norm();
  out.converged = out.final_residual <= target_residual;
  return out;
}

RgaResult rga_equal_weight(const OrthoSystem& sys, const PointSet& candidates,
                           int m, const Tolerances& tol) {
  (void)tol;
  const Index n = sys.size();
  const Index cand = candidates.points.rows();
  if (cand == 0) throw std::invalid_argument("rga: empty candidate set");
  if (cand > kCandidateCap)
    throw std::invalid_argument("rga: candidate cap is 1e5 points");
  if (m < 1) throw std::invalid_argument("rga: need m >= 1");

  const Matrix values = sys.eval_matrix(candidates);
  const double t = sys.condition_t();
  const double b = static_cast<double>(n) * t * t;

  RgaResult out;
  out.b = b;
  out.points.dim = candidates.dim;
  out.points.frame = candidates.frame;
  out.points.points.resize(m, candidates.points.cols());

  Matrix sum = Matrix::Zero(n, n);
  for (int k = 1; k <= m; ++k) {
    // Residual direction before step k: I - average of the first k-1 atoms
    // (the 1/B normalization is positive and cannot change the argmax).
    Matrix r_mat = Matrix::Identity(n, n);
    if (k > 1) r_mat -= sum / static_cast<double>(k - 1);
    const Vector scores = quadratic_scores(values, r_mat);
    Index best_idx = 0;
    double best = scores(0);
    for (Index c = 1; c < cand; ++c)
      if (scores(c) > best) {
        best = scores(c);
        best_idx = c;
      }
    const Vector u = values.row(best_idx).transpose();
    sum += u * u.transpose();
    out.points.points.row(k - 1) = candidates.points.row(best_idx);
    out.trace.selected.push_back(best_idx);
    const double err =
        (sum / static_cast<double>(k) - Matrix::Identity(n, n)).norm();
    out.trace.residual_norms.push_back(err / b);
    out.final_error = err;
  }
  return out;
}

}  // namespace normgrid::greedy
