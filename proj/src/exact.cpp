#include "normgrid/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "normgrid/certify.hpp"
#include "normgrid/numkernel.hpp"

namespace normgrid::exact {

namespace {

// Square node matrix M(i, j) = u_i(xi_j) from candidate rows.
Matrix node_matrix(const Matrix& candidate_values,
                   const std::vector<Index>& sel, Index nfun) {
  Matrix m(nfun, static_cast<Index>(sel.size()));
  for (std::size_t j = 0; j < sel.size(); ++j)
    m.col(static_cast<Index>(j)) =
        candidate_values.row(sel[j]).head(nfun).transpose();
  return m;
}

}  // namespace

NodeSelection select_nodes_by_determinant(const Matrix& candidate_values,
                                          int count, const Tolerances& tol) {
  const Index cand = candidate_values.rows();
  const Index nfun = candidate_values.cols();
  if (count < 1 || count > nfun)
    throw std::invalid_argument(
        "select_nodes_by_determinant: count must be in [1, #functions]");
  if (count > 500)
    throw std::invalid_argument(
        "select_nodes_by_determinant: node count cap is 500");
  if (cand < count)
    throw std::invalid_argument(
        "select_nodes_by_determinant: fewer candidates than nodes");

  const double scale =
      std::max(1.0, candidate_values.leftCols(count).cwiseAbs().maxCoeff());
  std::vector<char> used(static_cast<std::size_t>(cand), 0);
  NodeSelection sel;
  sel.indices.reserve(static_cast<std::size_t>(count));

  for (int k = 1; k <= count; ++k) {
    // Cofactor direction: the determinant obtained by appending candidate x
    // as point k is gamma . u(x) for the unit normal gamma of the span of
    // the already-selected columns (Laplace expansion along the new column).
    Vector gamma;
    if (k == 1) {
      gamma = Vector::Zero(1);
      gamma(0) = 1.0;
    } else {
      Matrix a(k, k - 1);
      for (int j = 0; j < k - 1; ++j)
        a.col(j) = candidate_values.row(sel.indices[static_cast<std::size_t>(j)])
                       .head(k)
                       .transpose();
      Eigen::HouseholderQR<Matrix> qr(a);
      Matrix qfull = qr.householderQ() * Matrix::Identity(k, k);
      gamma = qfull.col(k - 1);
    }
    double best = -1.0;
    Index best_idx = -1;
    for (Index c = 0; c < cand; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double s =
          std::abs(gamma.dot(candidate_values.row(c).head(k).transpose()));
      if (s > best) {
        best = s;
        best_idx = c;
      }
    }
    if (best_idx < 0 || best <= tol.rank * scale)
      throw SpanDeficiency(
          k, "node selection step " + std::to_string(k) +
                 ": every remaining candidate leaves the system singular");
    used[static_cast<std::size_t>(best_idx)] = 1;
    sel.indices.push_back(best_idx);
  }

  Matrix m = node_matrix(candidate_values, sel.indices, count);
  sel.det = numkernel::det_lu(m);
  Matrix ms = m;
  for (Index i = 0; i < ms.rows(); ++i) {
    const double r = ms.row(i).cwiseAbs().maxCoeff();
    if (r > 0.0) ms.row(i) /= r;
  }
  sel.scaled_det = numkernel::det_lu(ms);
  return sel;
}

PointSet select_nodes(const OrthoSystem& sys, const PointSet& candidates,
                      const Tolerances& tol) {
  if (sys.size() > 200)
    throw std::invalid_argument("select_nodes: space dimension cap is 200");
  const Matrix values = sys.eval_matrix(candidates);
  NodeSelection sel = select_nodes_by_determinant(values, sys.size(), tol);
  std::vector<Index> order = sel.indices;
  std::sort(order.begin(), order.end());
  return select_rows(candidates, order);
}

RecoveryOperator build_recovery(const OrthoSystem& sys, const PointSet& nodes,
                                const Tolerances& tol) {
  const int n = sys.size();
  if (nodes.size() != n)
    throw std::invalid_argument(
        "build_recovery: node count must equal the space dimension");
  const Matrix v = sys.eval_matrix(nodes);  // v(j, i) = u_i(xi_j)
  Eigen::FullPivLU<Matrix> lu(v.transpose());
  lu.setThreshold(tol.rank);
  if (!lu.isInvertible())
    throw SpanDeficiency(static_cast<int>(lu.rank()) + 1,
                         "build_recovery: node matrix is singular");
  RecoveryOperator op;
  op.nodes = nodes;
  // psi_j = sum_i (U^{-1})(j, i) u_i reproduces every span element:
  // psi_j(xi_l) = (U^{-1} U)(j, l) = delta_jl.
  op.dual_coeffs = lu.inverse();
  return op;
}

WeightedRule cubature_from_values(const Matrix& candidate_values,
                                  const PointSet& candidates,
                                  const Vector& moments,
                                  const Tolerances& tol) {
  const Index nfun = candidate_values.cols();
  if (moments.size() != nfun)
    throw std::invalid_argument("cubature: moment/function count mismatch");
  if (candidate_values.rows() != candidates.points.rows())
    throw std::invalid_argument("cubature: value/point row mismatch");

  // Work on a maximal independent subset of the functions so linearly
  // dependent spans (e.g. power lifts) stay solvable; the residual check at
  // the end covers the full moment vector.
  Eigen::ColPivHouseholderQR<Matrix> qr(candidate_values);
  qr.setThreshold(tol.rank);
  const Index r = qr.rank();
  if (r == 0) throw SpanDeficiency(1, "cubature: all candidate values vanish");
  std::vector<Index> cols(qr.colsPermutation().indices().data(),
                          qr.colsPermutation().indices().data() + r);
  std::sort(cols.begin(), cols.end());

  Matrix sub(candidate_values.rows(), r);
  for (Index j = 0; j < r; ++j)
    sub.col(j) = candidate_values.col(cols[static_cast<std::size_t>(j)]);

  NodeSelection sel =
      select_nodes_by_determinant(sub, static_cast<int>(r), tol);
  std::vector<Index> order(sel.indices);
  std::sort(order.begin(), order.end());

  Matrix m = node_matrix(sub, order, r);
  Vector bm(r);
  for (Index i = 0; i < r; ++i) bm(i) = moments(cols[static_cast<std::size_t>(i)]);
  Vector lambda = m.partialPivLu().solve(bm);

  Matrix afull(nfun, r);
  for (Index j = 0; j < r; ++j)
    afull.col(j) = candidate_values.row(order[static_cast<std::size_t>(j)])
                       .transpose();
  const double res = (afull * lambda - moments).cwiseAbs().maxCoeff();
  const double thresh =
      tol.feasibility * std::max(1.0, moments.cwiseAbs().maxCoeff());
  if (res > thresh)
    throw NumericalFailure(
        "cubature: moment residual " + std::to_string(res) +
        " exceeds tolerance (moments inconsistent with the span)");

  WeightedRule rule;
  rule.nodes = select_rows(candidates, order);
  rule.weights = lambda;
  rule.tags = {"cubature"};
  return rule;
}

WeightedRule exact_cubature(const OrthoSystem& sys, const PointSet& candidates,
                            const Vector& moments, const Tolerances& tol) {
  return cubature_from_values(sys.eval_matrix(candidates), candidates, moments,
                              tol);
}

WeightedRule exact_cubature(const OrthoSystem& sys, const PointSet& candidates,
                            const Tolerances& tol) {
  return exact_cubature(sys, candidates, sys.moments(), tol);
}

// ---------------------------------------------------------------- power lift

namespace {

void enumerate_exponents(std::size_t pos, int remaining, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate_exponents(pos + 1, remaining - e, cur, out);
  }
}

double binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

TrigPolynomial constant_one(int dim) {
  FrequencySet zero = build_explicit(
      dim, {std::vector<std::int64_t>(static_cast<std::size_t>(dim), 0)});
  ComplexVector c(1);
  c(0) = 1.0;
  return TrigPolynomial(std::move(zero), std::move(c));
}

}  // namespace

Matrix LiftedSystem::eval_matrix(const Matrix& base_values) const {
  if (base_values.cols() != base_size)
    throw std::invalid_argument("lift: base value column count mismatch");
  Matrix out = Matrix::Ones(base_values.rows(), size());
  for (int t = 0; t < size(); ++t) {
    const auto& e = exponents[static_cast<std::size_t>(t)];
    for (int i = 0; i < base_size; ++i)
      for (int rep = 0; rep < e[static_cast<std::size_t>(i)]; ++rep)
        out.col(t).array() *= base_values.col(i).array();
  }
  return out;
}

Vector LiftedSystem::exact_moments(const OrthoSystem& base) const {
  Vector mom(size());
  if (base.kind() == OrthoSystem::Kind::tabulated) {
    const Matrix lifted = eval_matrix(base.table_values());
    mom = lifted.colwise().mean().transpose();
    return mom;
  }
  const auto& forms = base.trig_forms();
  for (int t = 0; t < size(); ++t) {
    const auto& e = exponents[static_cast<std::size_t>(t)];
    TrigPolynomial prod = constant_one(base.point_dim());
    for (int i = 0; i < base_size; ++i)
      for (int rep = 0; rep < e[static_cast<std::size_t>(i)]; ++rep)
        prod = prod.multiply(forms[static_cast<std::size_t>(i)]);
    mom(t) = prod.mean().real();
  }
  return mom;
}

LiftedSystem lift_power(int base_size, int q) {
  if (base_size < 1 || q < 1)
    throw std::invalid_argument("lift_power: need base_size >= 1 and q >= 1");
  if (binom(base_size + q - 1, q) > 5000.0)
    throw std::invalid_argument(
        "lift_power: product count binom(n+q-1, q) exceeds the cap of 5000");
  LiftedSystem lift;
  lift.base_size = base_size;
  lift.q = q;
  std::vector<int> cur(static_cast<std::size_t>(base_size), 0);
  enumerate_exponents(0, q, cur, lift.exponents);
  return lift;
}

namespace {

// Dense torus grid resolving every product of `q` span elements:
// oversample x (2 q K_j + 1) points on axis j, K_j = max frequency.
PointSet lifted_candidate_grid(const OrthoSystem& sys, int q, int oversample) {
  if (sys.kind() == OrthoSystem::Kind::tabulated) return sys.domain_points();
  const auto kmax = sys.frequency_support().max_abs_per_axis();
  std::vector<std::int64_t> per_axis(kmax.size());
  for (std::size_t j = 0; j < kmax.size(); ++j)
    per_axis[j] =
        std::max<std::int64_t>(1, oversample * (2 * q * kmax[j] + 1));
  return uniform_grid(per_axis);
}

}  // namespace

WeightedRule exact_weighted_discretization(const OrthoSystem& sys, int q,
                                           int grid_oversample,
                                           const Tolerances& tol) {
  if (q < 2 || q % 2 != 0)
    throw std::invalid_argument(
        "exact_weighted_discretization: q must be an even integer >= 2");
  const LiftedSystem lift = lift_power(sys.size(), q);
  const PointSet cand = lifted_candidate_grid(sys, q, grid_oversample);
  const Matrix lifted_values = lift.eval_matrix(sys.eval_matrix(cand));
  WeightedRule rule = cubature_from_values(lifted_values, cand,
                                           lift.exact_moments(sys), tol);
  rule.tags = {"exact_q:" + std::to_string(q)};
  return rule;
}

// ------------------------------------------------------- positive compression

namespace {

struct CompressInput {
  Matrix a;        // rows = moments (+ optional mass row), cols = candidates
  Vector b;        // target moments
  PointSet cand;   // candidate points, column-aligned with `a`
};

TchakaloffResult compress_core(CompressInput in, Index support_limit,
                               const Tolerances& tol) {
  const double b_scale = std::max(1.0, in.b.cwiseAbs().maxCoeff());
  std::vector<Index> alive(static_cast<std::size_t>(in.a.cols()));
  std::iota(alive.begin(), alive.end(), Index{0});

  TchakaloffResult result;
  Vector x;
  for (;;) {
    Matrix sub(in.a.rows(), static_cast<Index>(alive.size()));
    for (std::size_t j = 0; j < alive.size(); ++j)
      sub.col(static_cast<Index>(j)) = in.a.col(alive[j]);
    auto nn = numkernel::nnls(sub, in.b, 0, tol);
    result.nnls_iterations += nn.iterations;
    const double res = (sub * nn.x - in.b).cwiseAbs().maxCoeff();
    if (res > tol.feasibility * b_scale)
      throw Infeasible(
          "compression: moments are not in the candidate cone (residual " +
          std::to_string(res) + ")");
    std::vector<Index> support;
    for (Index j = 0; j < nn.x.size(); ++j)
      if (nn.x(j) > 0.0) support.push_back(j);
    if (static_cast<Index>(support.size()) <= support_limit) {
      result.moment_residual = res;
      std::vector<Index> rows;
      Vector w(static_cast<Index>(support.size()));
      for (std::size_t j = 0; j < support.size(); ++j) {
        rows.push_back(alive[static_cast<std::size_t>(support[j])]);
        w(static_cast<Index>(j)) = nn.x(support[j]);
      }
      result.rule.nodes = select_rows(in.cand, rows);
      result.rule.weights = w;
      return result;
    }
    // Carathéodory-style pruning: drop the smallest-weight support column
    // and re-solve on the rest.
    Index drop = support[0];
    for (Index j : support)
      if (nn.x(j) < nn.x(drop)) drop = j;
    std::vector<Index> next;
    next.reserve(alive.size() - 1);
    for (Index j = 0; j < static_cast<Index>(alive.size()); ++j)
      if (j != drop) next.push_back(alive[static_cast<std::size_t>(j)]);
    alive = std::move(next);
  }
}

CompressInput moments_of_rule(const OrthoSystem& sys, const WeightedRule& rule,
                              int grid_oversample) {
  CompressInput in;
  PointSet grid = sys.kind() == OrthoSystem::Kind::tabulated
                      ? sys.domain_points()
                      : sys.reference_grid(grid_oversample);
  // Input nodes come first so nonnegative restarts prefer them on ties.
  in.cand = concat_points(rule.nodes, grid);
  in.a = sys.eval_matrix(in.cand).transpose();
  in.b = sys.eval_matrix(rule.nodes).transpose() * rule.weights;
  return in;
}

}  // namespace

TchakaloffResult tchakaloff_compress(const OrthoSystem& sys,
                                     const WeightedRule& input,
                                     int grid_oversample,
                                     const Tolerances& tol) {
  CompressInput in = moments_of_rule(sys, input, grid_oversample);
  TchakaloffResult result = compress_core(std::move(in), sys.size(), tol);
  result.rule.tags = {"positive", "compressed"};
  return result;
}

TchakaloffResult tchakaloff_probability(const OrthoSystem& sys,
                                        const std::optional<WeightedRule>& input,
                                        int grid_oversample,
                                        const Tolerances& tol) {
  CompressInput in;
  double mass = 1.0;
  if (input) {
    in = moments_of_rule(sys, *input, grid_oversample);
    mass = input->total_mass();
  } else {
    in.cand = sys.kind() == OrthoSystem::Kind::tabulated
                  ? sys.domain_points()
                  : sys.reference_grid(grid_oversample);
    in.a = sys.eval_matrix(in.cand).transpose();
    in.b = sys.moments();
  }
  // Append the constant so the compression preserves total mass.
  in.a.conservativeResize(in.a.rows() + 1, Eigen::NoChange);
  in.a.row(in.a.rows() - 1).setOnes();
  in.b.conservativeResize(in.b.size() + 1);
  in.b(in.b.size() - 1) = mass;

  TchakaloffResult result = compress_core(std::move(in), sys.size() + 1, tol);
  result.rule.tags = {"positive", "probability"};
  return result;
}

TchakaloffResult positive_exact_lq(const OrthoSystem& sys, int q,
                                   int grid_oversample,
                                   const Tolerances& tol) {
  if (q < 1) throw std::invalid_argument("positive_exact_lq: q must be >= 1");
  const LiftedSystem lift = lift_power(sys.size(), q);
  CompressInput in;
  in.cand = lifted_candidate_grid(sys, q, grid_oversample);
  in.a = lift.eval_matrix(sys.eval_matrix(in.cand)).transpose();
  in.b = lift.exact_moments(sys);
  TchakaloffResult result = compress_core(std::move(in), lift.size(), tol);
  result.rule.tags = {"positive", "exact_q:" + std::to_string(q)};
  return result;
}

// ------------------------------------------------------------ stable weights

StableWeightsResult stable_exact_weights(const OrthoSystem& sys,
                                         const PointSet& w_points,
                                         const Vector& mu, double p,
                                         int oversample,
                                         const Tolerances& tol) {
  const int n = sys.size();
  const Index w = w_points.points.rows();
  if (mu.size() != w)
    throw std::invalid_argument("stable_exact_weights: |mu| != |W|");
  if (w > 0 && mu.minCoeff() <= 0.0)
    throw std::invalid_argument("stable_exact_weights: mu must be positive");

  StableWeightsResult out;
  out.p = p;
  const Matrix values = sys.eval_matrix(w_points);  // w x n

  if (p == 2.0) {
    out.p_dual = 2.0;
    const Matrix gram = values.transpose() * mu.asDiagonal() * values;
    const auto [lo, hi] = numkernel::sym_eig_extreme(gram, tol);
    (void)hi;
    if (lo <= 0.0)
      throw Infeasible(
          "stable_exact_weights: weighted Gram is singular, no finite "
          "one-sided constant for p=2");
    out.measured_c1 = 1.0 / std::sqrt(lo);
  } else if (std::isinf(p)) {
    out.p_dual = 1.0;
    auto report = certify::certify_linfty(sys, w_points, oversample, tol);
    if (!report.bounded)
      throw Infeasible(
          "stable_exact_weights: W is not norming for the span (LP "
          "unbounded), no finite one-sided constant for p=inf");
    out.measured_c1 = report.ratio;
  } else if (p == 1.0) {
    out.p_dual = std::numeric_limits<double>::infinity();
    WeightedRule probe_rule;
    probe_rule.nodes = w_points;
    probe_rule.weights = mu;
    auto cert = certify::certify_l1(sys, probe_rule, 64, /*seed=*/1, oversample);
    out.c1_empirical = true;
    out.measured_c1 = cert.c1 > 0.0
                          ? 1.0 / cert.c1
                          : std::numeric_limits<double>::infinity();
  } else {
    throw std::invalid_argument("stable_exact_weights: p must be 1, 2 or inf");
  }

  const Matrix a = values.transpose();  // n x w
  out.lambda = numkernel::min_weighted_norm_solution(a, sys.moments(), mu,
                                                     out.p_dual, tol);
  out.stability_norm = numkernel::weighted_dual_norm(out.lambda, mu, out.p_dual);

  if (!out.c1_empirical) {
    if (out.stability_norm > out.measured_c1 + 1e-6)
      throw NumericalFailure(
          "stable_exact_weights: minimized norm " +
          std::to_string(out.stability_norm) + " exceeds the measured "
          "one-sided constant " + std::to_string(out.measured_c1));
  } else {
    // The achieved norm is itself a duality-certified lower bound of the
    // true constant; report the sharper of the two estimates.
    out.measured_c1 = std::max(out.measured_c1, out.stability_norm);
  }
  (void)n;
  return out;
}

RecoveryOperator recovery_from_exact_l2(const OrthoSystem& sys,
                                        const WeightedRule& rule,
                                        const Tolerances& tol) {
  const int n = sys.size();
  const Matrix v = sys.eval_matrix(rule.nodes);  // m x n
  const Matrix gram = v.transpose() * rule.weights.asDiagonal() * v;
  const double dev =
      (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (dev > tol.feasibility)
    throw std::invalid_argument(
        "recovery_from_exact_l2: rule is not exactly L2-discretizing "
        "(weighted Gram deviates from identity by " + std::to_string(dev) +
        ")");
  // psi_j = lambda_j sum_i u_i(xi_j) u_i; reproduction follows from
  // V^T diag(lambda) V = I.
  RecoveryOperator op;
  op.nodes = rule.nodes;
  op.dual_coeffs = rule.weights.asDiagonal() * v;
  return op;
}

}  // namespace normgrid::exact
