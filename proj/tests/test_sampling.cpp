#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "normgrid/frequency_set.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/sampling.hpp"

using namespace normgrid;

TEST_CASE("chernoff tail bounds decrease in the sample size") {
  for (auto tail : {sampling::Tail::lower, sampling::Tail::upper}) {
    const double a = sampling::chernoff_bound(10, 0.5, 1.0, tail);
    const double b = sampling::chernoff_bound(10, 0.5, 4.0, tail);
    CHECK(b < a);
    CHECK(a <= 10.0);  // n exp(...) cap
    CHECK(b > 0.0);
  }
}

TEST_CASE("sample plans scale like n log n over delta") {
  const auto p1 = sampling::plan_sample_size(50, 1.0, 0.5, 0.01);
  CHECK(p1.n == 50);
  CHECK(p1.m >= 50);
  CHECK(sampling::chernoff_bound(p1.n, p1.eps, double(p1.m) / p1.r,
                                 sampling::Tail::lower) +
            sampling::chernoff_bound(p1.n, p1.eps, double(p1.m) / p1.r,
                                     sampling::Tail::upper) <=
        0.01);

  // more functions, tighter eps, smaller delta all demand more samples
  CHECK(sampling::plan_sample_size(100, 1.0, 0.5, 0.01).m > p1.m);
  CHECK(sampling::plan_sample_size(50, 1.0, 0.25, 0.01).m > p1.m);
  CHECK(sampling::plan_sample_size(50, 1.0, 0.5, 1e-6).m > p1.m);
}

TEST_CASE("iid sampling certifies a planned two-sided inequality") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto plan = sampling::plan_sample_size(sys.size(), 1.0, 0.5, 0.05);
  const auto res = sampling::sample_and_certify_l2(
      sys, static_cast<int>(plan.m), 12345);
  CHECK(res.points.size() == plan.m);
  // the planned failure probability is 5%; the pinned seed is a pass
  CHECK(res.cert.c1 >= 1.0 - plan.eps);
  CHECK(res.cert.c2 <= 1.0 + plan.eps);
  CHECK_FALSE(res.cert.empirical);
}

TEST_CASE("grid-mode sampling draws from the oversampled reference grid") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{2}));
  const auto res = sampling::sample_and_certify_l2(
      sys, 300, 99, sampling::SampleMode::grid);
  CHECK(res.points.size() == 300);
  CHECK(res.cert.c1 > 0.0);
  // grid mode must produce points from the canonical oversampled lattice
  const double step = kTwoPi / (8.0 * (2 * 2 + 1));
  for (Index i = 0; i < 10; ++i) {
    const double x = res.points.points(i, 0);
    const double k = x / step;
    CHECK(std::abs(k - std::round(k)) < 1e-9);
  }
}

TEST_CASE("subset selection keeps the best trial and a positive constant") {
  const OrthoSystem sys = OrthoSystem::walsh(6, 6);
  const auto res = sampling::subset_select_discrete(sys, 24, 16, 7);
  CHECK(res.indices.size() == 24);
  CHECK(res.best_trial >= 0);
  CHECK(res.best_trial < 16);
  CHECK(res.cert.c1 > 0.0);
  CHECK(res.cert.c2 >= res.cert.c1);
  // indices address distinct table rows
  for (std::size_t i = 1; i < res.indices.size(); ++i)
    CHECK(res.indices[i] > res.indices[i - 1]);
}

TEST_CASE("monte carlo domains reach the requested off-diagonal precision") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto res = sampling::monte_carlo_domain(sys, 0.2, 11);
  CHECK(res.achieved_offdiag <= 0.2);
  CHECK(res.m == res.sample_points.size());
  // the re-tabulated system is orthonormal on its own domain by construction
  const Matrix v = res.system.table_values();
  const Matrix gram = v.transpose() * v / double(res.m);
  CHECK((gram - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK(res.cert.c1 > 0.0);
  CHECK(res.fourth_moment > 0.0);
}

TEST_CASE("l1 sampling reports an empirical certificate") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto res = sampling::sample_and_certify_l1(sys, 400, 5, 32);
  CHECK(res.cert.empirical);
  CHECK(res.cert.q == doctest::Approx(1.0));
  CHECK(res.cert.c1 > 0.0);
  CHECK(res.cert.c1 <= res.cert.c2);
}

TEST_CASE("sampling is reproducible in the seed") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{1}));
  const auto a = sampling::sample_and_certify_l2(sys, 100, 3);
  const auto b = sampling::sample_and_certify_l2(sys, 100, 3);
  CHECK((a.points.points - b.points.points).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.cert.c1 == b.cert.c1);
}
