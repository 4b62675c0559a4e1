#include <cmath>
#include <cstdint>
#include <limits>

#include "doctest.h"
#include "normgrid/certify.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/numkernel.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/rng.hpp"
#include "normgrid/trig_polynomial.hpp"
#include "normgrid/weighted_rule.hpp"

using namespace normgrid;

namespace {

// Power-iteration extreme eigenvalues (independent of the library solver).
std::pair<double, double> extreme_by_power(const Matrix& a) {
  const Index n = a.rows();
  SplitMix64 rng(902);
  auto top = [&](const Matrix& m) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.normal();
    v.normalize();
    double lam = 0.0;
    for (int it = 0; it < 20000; ++it) {
      Vector w = m * v;
      lam = v.dot(w);
      if (w.norm() < 1e-300) return 0.0;
      v = w.normalized();
    }
    return lam;
  };
  const double shift = a.cwiseAbs().sum() + 1.0;  // > spectral radius
  const double hi = top(a + shift * Matrix::Identity(n, n)) - shift;
  const double lo = shift - top(shift * Matrix::Identity(n, n) - a);
  return {lo, hi};
}

}  // namespace

TEST_CASE("canonical grid rule is a perfect L2 discretization") {
  for (const auto& n : std::vector<std::vector<std::int64_t>>{{3}, {2, 1}}) {
    const OrthoSystem sys = OrthoSystem::torus_trig(build_box(n));
    const auto cert = certify::certify_l2(
        sys, WeightedRule::equal_weight(sys.reference_grid(1)));
    CHECK(std::abs(cert.c1 - 1.0) < 1e-12);
    CHECK(std::abs(cert.c2 - 1.0) < 1e-12);
    CHECK(cert.method == "eigen_exact");
    CHECK_FALSE(cert.empirical);
  }
}

TEST_CASE("L2 constants equal the extreme eigenvalues of the weighted gram") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const PointSet pts = random_torus(40, 1, 8);
  const WeightedRule rule = WeightedRule::equal_weight(pts);
  const auto cert = certify::certify_l2(sys, rule);

  const Matrix v = sys.eval_matrix(pts);
  const Matrix gram = v.transpose() * rule.weights.asDiagonal() * v;
  const auto [lo, hi] = extreme_by_power(gram);
  CHECK(cert.c1 == doctest::Approx(lo).epsilon(1e-6));
  CHECK(cert.c2 == doctest::Approx(hi).epsilon(1e-6));
}

TEST_CASE("rank-deficient node sets give a zero lower constant") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const auto cert = certify::certify_l2(
      sys, WeightedRule::equal_weight(random_torus(3, 1, 4)));  // m < n
  CHECK(cert.c1 <= 1e-12);
  CHECK(cert.c2 > 0.0);
}

TEST_CASE("the LP sup-norm ratio matches the Lebesgue-function closed form") {
  // on exactly n nodes the LP value at x is ||V^{-T} u(x)||_1
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const PointSet nodes = sys.reference_grid(1);
  const int ov = 4;
  const auto rep = certify::certify_linfty(sys, nodes, ov);
  REQUIRE(rep.bounded);

  const Matrix v = sys.eval_matrix(nodes);
  const auto solver = v.transpose().partialPivLu();
  const PointSet grid = sys.reference_grid(ov);
  double want = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    want = std::max(want,
                    solver.solve(sys.eval_all(grid.point(i))).cwiseAbs().sum());
  }
  CHECK(rep.ratio == doctest::Approx(want).epsilon(1e-8));
  CHECK(rep.ratio >= 1.0 - 1e-12);
  CHECK(rep.cert.c1 == doctest::Approx(1.0 / rep.ratio));
}

TEST_CASE("non-norming node sets are flagged unbounded") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto rep = certify::certify_linfty(sys, random_torus(2, 1, 5), 4);
  CHECK_FALSE(rep.bounded);
  CHECK(rep.cert.unbounded);
  CHECK(std::isinf(rep.cert.ratio));
}

TEST_CASE("LP grid sweep is invariant under the thread count") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{3}));
  const PointSet nodes = sys.reference_grid(1);
  const auto a = certify::certify_linfty(sys, nodes, 4, {}, 1);
  const auto b = certify::certify_linfty(sys, nodes, 4, {}, 4);
  CHECK(a.ratio == b.ratio);
  CHECK((a.worst_point - b.worst_point).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("empirical L1 certificates bracket the canonical grid rule") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto cert = certify::certify_l1(
      sys, WeightedRule::equal_weight(sys.reference_grid(1)), 64, 13);
  CHECK(cert.empirical);
  CHECK(cert.method == "empirical_probe");
  CHECK(cert.c1 > 0.3);   // the 3-point grid is a genuine L1 discretization
  CHECK(cert.c1 <= cert.c2);
  CHECK(cert.c2 < 3.0);
}

TEST_CASE("nikolskii conversion multiplies by sqrt of n over c1") {
  certify::DiscretizationCertificate cert;
  cert.n = 9;
  cert.c1 = 0.25;
  CHECK(certify::linfty_from_l2(cert) == doctest::Approx(std::sqrt(9.0 / 0.25)));
}

TEST_CASE("remez probe ratios stay near one for small cut fractions") {
  const auto rep = certify::remez_check(build_box(std::vector<std::int64_t>{3}),
                                        0.05, 16, 3);
  CHECK(rep.trials == 16);
  CHECK(rep.max_ratio >= 1.0);
  for (double r : rep.ratios) {
    CHECK(r >= 1.0);
    CHECK(r <= rep.max_ratio);
  }
  // removing 5% of a fine grid cannot hide much of the sup of low-degree
  // polynomials; the observed ratio stays modest
  CHECK(rep.max_ratio < 2.0);
}

TEST_CASE("bernstein probe sits at the sharp single-mode constant in 1d") {
  const auto rep = certify::bernstein_probe(8, 1, 16, 4);
  // the full-order mode attains ||f'|| = N ||f|| exactly; random elements
  // cannot beat it, so the ratio to N is 1 up to grid slack
  CHECK(rep.c_hat >= 0.999);
  CHECK(rep.c_hat <= 1.01);
}

TEST_CASE("bernstein probe stays bounded for the planar hyperbolic cross") {
  const auto rep = certify::bernstein_probe(4, 2, 8, 4);
  CHECK(rep.c_hat > 0.0);
  CHECK(rep.c_hat < 4.0);  // N log N normalization keeps it order one
}
