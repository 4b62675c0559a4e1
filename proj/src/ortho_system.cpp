#include "normgrid/ortho_system.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace normgrid {

namespace {

const double kSqrt2 = std::sqrt(2.0);

FrequencySet union_support(const std::vector<TrigPolynomial>& basis) {
  if (basis.empty()) throw std::invalid_argument("OrthoSystem: empty basis");
  std::vector<std::vector<std::int64_t>> freqs;
  for (const auto& f : basis)
    freqs.insert(freqs.end(), f.support().freqs.begin(), f.support().freqs.end());
  return build_explicit(basis.front().dim(), std::move(freqs));
}

}  // namespace

OrthoSystem OrthoSystem::torus_trig(const FrequencySet& q) {
  if (q.size() == 0) throw std::invalid_argument("torus_trig: empty support");
  if (!q.is_symmetric())
    throw std::invalid_argument("torus_trig: support must be symmetric");

  OrthoSystem sys;
  sys.kind_ = Kind::torus_trig;
  sys.point_dim_ = q.dim;
  sys.support_ = q;

  std::vector<std::int64_t> neg(q.dim);
  for (const auto& k : q.freqs) {
    for (int j = 0; j < q.dim; ++j) neg[j] = -k[j];
    if (k < neg) continue;  // one basis pair per +/- orbit
    FrequencySet sup;
    sup.dim = q.dim;
    if (k == neg) {  // zero frequency: the constant
      sup.freqs = {k};
      sys.trig_basis_.emplace_back(sup, ComplexVector::Ones(1));
      continue;
    }
    sup.freqs = {neg, k};  // sorted: neg < k
    ComplexVector ccos(2), csin(2);
    ccos[0] = std::complex<double>(kSqrt2 / 2.0, 0.0);
    ccos[1] = std::complex<double>(kSqrt2 / 2.0, 0.0);
    csin[0] = std::complex<double>(0.0, kSqrt2 / 2.0);
    csin[1] = std::complex<double>(0.0, -kSqrt2 / 2.0);
    sys.trig_basis_.emplace_back(sup, std::move(ccos));
    sys.trig_basis_.emplace_back(sup, std::move(csin));
  }
  sys.n_ = static_cast<int>(sys.trig_basis_.size());
  return sys;
}

OrthoSystem OrthoSystem::torus_span(std::vector<TrigPolynomial> basis) {
  OrthoSystem sys;
  sys.kind_ = Kind::torus_trig;
  sys.support_ = union_support(basis);
  sys.point_dim_ = sys.support_.dim;
  for (const auto& f : basis)
    if (!f.is_real_valued())
      throw std::invalid_argument("torus_span: basis must be real-valued");
  sys.trig_basis_ = std::move(basis);
  sys.n_ = static_cast<int>(sys.trig_basis_.size());
  return sys;
}

OrthoSystem OrthoSystem::tabulated(Matrix values, PointSet domain,
                                   double orthonormality_tol) {
  if (values.rows() != domain.size())
    throw std::invalid_argument("tabulated: table/domain size mismatch");
  if (values.rows() == 0 || values.cols() == 0)
    throw std::invalid_argument("tabulated: empty table");
  // Tabulated domains are index-addressed: coordinate 0 of row i must be
  // (i + 0.5)/M so that evaluation at a stored point is a table lookup.
  const double m_rows = static_cast<double>(values.rows());
  for (Index i = 0; i < domain.points.rows(); ++i)
    if (std::llround(domain.points(i, 0) * m_rows - 0.5) != i)
      throw std::invalid_argument(
          "tabulated: domain coordinate 0 must index rows as (i + 0.5)/M");
  const double m = static_cast<double>(values.rows());
  Matrix gram = values.transpose() * values / m;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > orthonormality_tol)
    throw std::invalid_argument(
        "tabulated: columns not orthonormal under the uniform measure");

  OrthoSystem sys;
  sys.kind_ = Kind::tabulated;
  sys.n_ = static_cast<int>(values.cols());
  sys.point_dim_ = domain.dim;
  sys.table_ = std::move(values);
  sys.domain_ = std::move(domain);
  return sys;
}

OrthoSystem OrthoSystem::walsh(int n, int log2_m) {
  if (log2_m < 0 || log2_m > 20)
    throw std::invalid_argument("walsh: log2_m out of range");
  const int m = 1 << log2_m;
  if (n < 1 || n > m) throw std::invalid_argument("walsh: need 1 <= n <= 2^k");
  Matrix table(m, n);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      table(j, i) = std::popcount(static_cast<unsigned>(i & j)) % 2 ? -1.0 : 1.0;
  Matrix pts(m, 1);
  for (int j = 0; j < m; ++j) pts(j, 0) = (j + 0.5) / m;
  return tabulated(std::move(table), cube_points(std::move(pts)));
}

Vector OrthoSystem::eval_all(const Vector& x) const {
  Vector out(n_);
  if (kind_ == Kind::tabulated) {
    out = table_.row(table_row(x)).transpose();
    return out;
  }
  for (int i = 0; i < n_; ++i) out[i] = trig_basis_[i].evaluate(x).real();
  return out;
}

Matrix OrthoSystem::eval_matrix(const PointSet& pts) const {
  Matrix out(pts.size(), n_);
  for (int r = 0; r < pts.size(); ++r) out.row(r) = eval_all(pts.point(r));
  return out;
}

double OrthoSystem::sup_sum_squares() const {
  if (kind_ == Kind::tabulated) return table_.rowwise().squaredNorm().maxCoeff();
  // The full symmetric basis has constant w(x) = n (cos^2 + sin^2 pairs).
  // For hand-built spans, bound w on a dense grid.
  bool full_basis = support_.is_symmetric() &&
                    n_ == support_.size();
  if (full_basis) return static_cast<double>(n_);
  PointSet grid = reference_grid(8);
  Matrix vals = eval_matrix(grid);
  return vals.rowwise().squaredNorm().maxCoeff();
}

Vector OrthoSystem::moments() const {
  Vector out(n_);
  if (kind_ == Kind::tabulated) {
    out = table_.colwise().mean().transpose();
    return out;
  }
  for (int i = 0; i < n_; ++i) out[i] = trig_basis_[i].mean().real();
  return out;
}

const std::vector<TrigPolynomial>& OrthoSystem::trig_forms() const {
  if (kind_ != Kind::torus_trig)
    throw std::logic_error("trig_forms: not a torus system");
  return trig_basis_;
}

TrigPolynomial OrthoSystem::combine(const Vector& coeffs) const {
  if (kind_ != Kind::torus_trig)
    throw std::logic_error("combine: not a torus system");
  if (coeffs.size() != n_)
    throw std::invalid_argument("combine: wrong coefficient count");
  std::map<std::vector<std::int64_t>, std::complex<double>> acc;
  for (int i = 0; i < n_; ++i) {
    const auto& f = trig_basis_[i];
    for (int t = 0; t < f.support().size(); ++t)
      acc[f.support().freqs[t]] += coeffs[i] * f.coeffs()[t];
  }
  FrequencySet sup;
  sup.dim = point_dim_;
  ComplexVector c(static_cast<Index>(acc.size()));
  Index i = 0;
  for (const auto& [k, v] : acc) {
    sup.freqs.push_back(k);
    c[i++] = v;
  }
  return TrigPolynomial(std::move(sup), std::move(c));
}

const FrequencySet& OrthoSystem::frequency_support() const {
  if (kind_ != Kind::torus_trig)
    throw std::logic_error("frequency_support: not a torus system");
  return support_;
}

PointSet OrthoSystem::reference_grid(int oversample) const {
  if (kind_ != Kind::torus_trig)
    throw std::logic_error("reference_grid: not a torus system");
  return lq_norm_grid_points(support_, oversample);
}

const Matrix& OrthoSystem::table_values() const {
  if (kind_ != Kind::tabulated)
    throw std::logic_error("table_values: not a tabulated system");
  return table_;
}

const PointSet& OrthoSystem::domain_points() const {
  if (kind_ != Kind::tabulated)
    throw std::logic_error("domain_points: not a tabulated system");
  return domain_;
}

PointSet OrthoSystem::domain_subset(const std::vector<std::size_t>& idx) const {
  if (kind_ != Kind::tabulated)
    throw std::logic_error("domain_subset: not a tabulated system");
  Matrix pts(static_cast<Index>(idx.size()), domain_.dim);
  for (std::size_t i = 0; i < idx.size(); ++i)
    pts.row(static_cast<Index>(i)) = domain_.points.row(static_cast<Index>(idx[i]));
  PointSet out = domain_;
  out.points = std::move(pts);
  return out;
}

Index OrthoSystem::table_row(const Vector& x) const {
  // Domain rows are addressed through coordinate 0 = (index + 0.5)/M.
  const double m = static_cast<double>(table_.rows());
  auto row = static_cast<Index>(std::llround(x[0] * m - 0.5));
  if (row < 0 || row >= table_.rows())
    throw std::invalid_argument("table_row: point outside tabulated domain");
  return row;
}

}  // namespace normgrid
