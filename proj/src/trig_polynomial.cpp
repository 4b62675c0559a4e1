#include "normgrid/trig_polynomial.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "normgrid/rng.hpp"

namespace normgrid {

TrigPolynomial::TrigPolynomial(FrequencySet support, ComplexVector coeffs)
    : support_(std::move(support)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != support_.size())
    throw std::invalid_argument("TrigPolynomial: coeffs/support size mismatch");
}

namespace {

struct KahanAccumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

std::complex<double> TrigPolynomial::evaluate(const Vector& x) const {
  if (x.size() != support_.dim)
    throw std::invalid_argument("TrigPolynomial::evaluate: wrong point dim");
  KahanAccumulator re, im;
  for (int i = 0; i < support_.size(); ++i) {
    double phase = 0.0;
    const auto& k = support_.freqs[i];
    for (int j = 0; j < support_.dim; ++j)
      phase += static_cast<double>(k[j]) * x[j];
    const double c = std::cos(phase), s = std::sin(phase);
    const std::complex<double> a = coeffs_[i];
    re.add(a.real() * c - a.imag() * s);
    im.add(a.real() * s + a.imag() * c);
  }
  return {re.sum, im.sum};
}

ComplexVector TrigPolynomial::evaluate(const PointSet& pts) const {
  ComplexVector out(pts.size());
  for (int i = 0; i < pts.size(); ++i) out[i] = evaluate(pts.point(i));
  return out;
}

double TrigPolynomial::l2_norm_exact() const { return coeffs_.norm(); }

std::complex<double> TrigPolynomial::mean() const {
  std::vector<std::int64_t> zero(support_.dim, 0);
  for (int i = 0; i < support_.size(); ++i)
    if (support_.freqs[i] == zero) return coeffs_[i];
  return {0.0, 0.0};
}

TrigPolynomial TrigPolynomial::multiply(const TrigPolynomial& other) const {
  if (dim() != other.dim())
    throw std::invalid_argument("TrigPolynomial::multiply: dim mismatch");
  std::map<std::vector<std::int64_t>, std::complex<double>> conv;
  std::vector<std::int64_t> sum(dim());
  for (int i = 0; i < support_.size(); ++i) {
    if (coeffs_[i] == std::complex<double>(0.0, 0.0)) continue;
    for (int j = 0; j < other.support_.size(); ++j) {
      for (int a = 0; a < dim(); ++a)
        sum[a] = support_.freqs[i][a] + other.support_.freqs[j][a];
      conv[sum] += coeffs_[i] * other.coeffs_[j];
    }
  }
  FrequencySet support;
  support.dim = dim();
  support.kind = FrequencySet::Kind::explicit_set;
  ComplexVector coeffs(static_cast<Index>(conv.size()));
  Index i = 0;
  for (const auto& [k, c] : conv) {
    support.freqs.push_back(k);
    coeffs[i++] = c;
  }
  return TrigPolynomial(std::move(support), std::move(coeffs));
}

TrigPolynomial TrigPolynomial::mixed_derivative() const {
  ComplexVector coeffs = coeffs_;
  for (int i = 0; i < support_.size(); ++i) {
    std::complex<double> factor(1.0, 0.0);
    for (int j = 0; j < support_.dim; ++j)
      factor *= std::complex<double>(0.0, static_cast<double>(support_.freqs[i][j]));
    coeffs[i] *= factor;
  }
  return TrigPolynomial(support_, std::move(coeffs));
}

bool TrigPolynomial::is_real_valued(double tol) const {
  double scale = std::max(1.0, coeffs_.lpNorm<Eigen::Infinity>());
  std::vector<std::int64_t> neg(support_.dim);
  for (int i = 0; i < support_.size(); ++i) {
    for (int j = 0; j < support_.dim; ++j) neg[j] = -support_.freqs[i][j];
    auto it = std::lower_bound(support_.freqs.begin(), support_.freqs.end(), neg);
    std::complex<double> mirror(0.0, 0.0);
    if (it != support_.freqs.end() && *it == neg)
      mirror = coeffs_[it - support_.freqs.begin()];
    if (std::abs(coeffs_[i] - std::conj(mirror)) > tol * scale) return false;
  }
  return true;
}

TrigPolynomial TrigPolynomial::random_complex(const FrequencySet& support,
                                              std::uint64_t seed) {
  SplitMix64 gen(seed);
  ComplexVector c(support.size());
  for (Index i = 0; i < c.size(); ++i) {
    double re = gen.normal();
    double im = gen.normal();
    c[i] = std::complex<double>(re, im);
  }
  return TrigPolynomial(support, std::move(c));
}

TrigPolynomial TrigPolynomial::random_real(const FrequencySet& support,
                                           std::uint64_t seed) {
  if (!support.is_symmetric())
    throw std::invalid_argument("random_real: support must be symmetric");
  SplitMix64 gen(seed);
  ComplexVector c = ComplexVector::Zero(support.size());
  std::vector<std::int64_t> neg(support.dim);
  for (int i = 0; i < support.size(); ++i) {
    const auto& k = support.freqs[i];
    for (int j = 0; j < support.dim; ++j) neg[j] = -k[j];
    if (k < neg) continue;  // handle each +/- pair once, from the larger rep
    if (k == neg) {         // zero frequency: real coefficient
      c[i] = std::complex<double>(gen.normal(), 0.0);
      continue;
    }
    double re = gen.normal(), im = gen.normal();
    auto it = std::lower_bound(support.freqs.begin(), support.freqs.end(), neg);
    c[i] = std::complex<double>(re, im);
    c[it - support.freqs.begin()] = std::complex<double>(re, -im);
  }
  return TrigPolynomial(support, std::move(c));
}

PointSet lq_norm_grid_points(const FrequencySet& support, int oversample) {
  if (oversample < 1) throw std::invalid_argument("lq_norm_grid: oversample < 1");
  auto maxabs = support.max_abs_per_axis();
  std::vector<std::int64_t> per_axis(maxabs.size());
  for (std::size_t j = 0; j < maxabs.size(); ++j)
    per_axis[j] = std::max<std::int64_t>(1, oversample * (2 * maxabs[j] + 1));
  return uniform_grid(per_axis);
}

double lq_norm_grid(const TrigPolynomial& f, double q, int oversample) {
  if (q < 1.0) throw std::invalid_argument("lq_norm_grid: q < 1");
  PointSet grid = lq_norm_grid_points(f.support(), oversample);
  ComplexVector vals = f.evaluate(grid);
  if (std::isinf(q)) {
    double best = 0.0;
    for (Index i = 0; i < vals.size(); ++i)
      best = std::max(best, std::abs(vals[i]));
    return best;
  }
  KahanAccumulator acc;
  for (Index i = 0; i < vals.size(); ++i)
    acc.add(std::pow(std::abs(vals[i]), q));
  return std::pow(acc.sum / static_cast<double>(vals.size()), 1.0 / q);
}

}  // namespace normgrid
