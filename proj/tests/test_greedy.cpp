#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "normgrid/certify.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/greedy.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"

using namespace normgrid;

TEST_CASE("gram atoms are rank-one with the right trace") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  Vector x(1);
  x << 1.3;
  const Matrix g = greedy::gram_atom(sys, x);
  const Vector u = sys.eval_all(x);
  CHECK((g - u * u.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(g.trace() == doctest::Approx(sys.size()));  // sum of squares = n
}

TEST_CASE("orthogonal greedy reaches an exact rule within the packed budget") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const auto res = greedy::oga_exact_l2(sys, sys.reference_grid(4));
  const int n = sys.size();
  REQUIRE(res.converged);
  CHECK(res.iterations <= n * (n + 1) / 2);
  CHECK(res.final_residual <= 1e-7);

  // the produced rule is an exact L2 discretization
  const auto cert = certify::certify_l2(sys, res.rule);
  CHECK(std::abs(cert.c1 - 1.0) <= 1e-6);
  CHECK(std::abs(cert.c2 - 1.0) <= 1e-6);

  // residuals never increase (orthogonal projection property)
  for (std::size_t i = 1; i < res.trace.residual_norms.size(); ++i) {
    CHECK(res.trace.residual_norms[i] <=
          res.trace.residual_norms[i - 1] + 1e-12);
  }
}

TEST_CASE("weak greedy still converges with a reduced selection factor") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto res =
      greedy::oga_exact_l2(sys, sys.reference_grid(6), 0, 1e-7, 0.5);
  CHECK(res.converged);
  CHECK(res.final_residual <= 1e-7);
}

TEST_CASE("greedy is deterministic including tie-breaks") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const auto a = greedy::oga_exact_l2(sys, sys.reference_grid(4));
  const auto b = greedy::oga_exact_l2(sys, sys.reference_grid(4));
  REQUIRE(a.trace.selected.size() == b.trace.selected.size());
  for (std::size_t i = 0; i < a.trace.selected.size(); ++i)
    CHECK(a.trace.selected[i] == b.trace.selected[i]);
}

TEST_CASE("insufficient candidates raise SpanDeficiency") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  PointSet two;
  two.dim = 1;
  two.frame = PointSet::Frame::torus;
  two.points = Matrix::Zero(2, 1);
  two.points(1, 0) = 1.0;
  CHECK_THROWS_AS(greedy::oga_exact_l2(sys, two), SpanDeficiency);
}

TEST_CASE("relaxed greedy error obeys the two-over-sqrt-m law") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const int m = 200;
  const auto res = greedy::rga_equal_weight(sys, sys.reference_grid(4), m);
  REQUIRE(res.points.size() == m);
  REQUIRE(static_cast<int>(res.trace.residual_norms.size()) == m);
  for (int k = 1; k <= m; ++k) {
    CHECK(res.trace.residual_norms[k - 1] <= 2.0 / std::sqrt(double(k)));
  }
  CHECK(res.b == doctest::Approx(sys.size()));  // n t^2 with t = 1
}

TEST_CASE("relaxed greedy selections repeat deterministically") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto a = greedy::rga_equal_weight(sys, sys.reference_grid(4), 50);
  const auto b = greedy::rga_equal_weight(sys, sys.reference_grid(4), 50);
  CHECK((a.points.points - b.points.points).cwiseAbs().maxCoeff() == 0.0);
}
