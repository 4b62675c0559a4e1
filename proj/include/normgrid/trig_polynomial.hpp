#pragma once

#include <complex>

#include "normgrid/common.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid {

/// Trigonometric polynomial sum_k c_k e^{i k.x} over a fixed frequency
/// support. Coefficients are aligned with support().freqs order.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(FrequencySet support, ComplexVector coeffs);

  const FrequencySet& support() const { return support_; }
  const ComplexVector& coeffs() const { return coeffs_; }
  int dim() const { return support_.dim; }

  /// Pointwise value; Kahan-compensated accumulation keeps the relative
  /// error well below 1e-12 even for 1e4-term supports.
  std::complex<double> evaluate(const Vector& x) const;
  ComplexVector evaluate(const PointSet& pts) const;

  /// Exact L2(T^d, normalized measure) norm: ||c||_2 by Parseval.
  double l2_norm_exact() const;

  /// Mean over the torus = coefficient at frequency zero.
  std::complex<double> mean() const;

  /// Coefficient-level product (support convolution); exact.
  TrigPolynomial multiply(const TrigPolynomial& other) const;

  /// d/dx_1 ... d/dx_dim (one derivative per axis).
  TrigPolynomial mixed_derivative() const;

  bool is_real_valued(double tol = 1e-12) const;

  static TrigPolynomial random_complex(const FrequencySet& support,
                                       std::uint64_t seed);
  /// Random real-valued polynomial on a symmetric support (c_{-k} = conj c_k).
  static TrigPolynomial random_real(const FrequencySet& support,
                                    std::uint64_t seed);

 private:
  FrequencySet support_;
  ComplexVector coeffs_;
};

/// Discrete L_q norm over the tensor grid with oversample*(2*max_j|k_j|+1)
/// points per axis (at least one): (mean |f|^q)^{1/q}; q may be +infinity
/// (grid max). Requires q >= 1.
double lq_norm_grid(const TrigPolynomial& f, double q, int oversample);

/// The grid used by lq_norm_grid.
PointSet lq_norm_grid_points(const FrequencySet& support, int oversample);

}  // namespace normgrid
