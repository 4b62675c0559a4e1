#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "normgrid/hypercross.hpp"
#include "normgrid/point_set.hpp"

using namespace normgrid;

TEST_CASE("harmonic split constants") {
  const auto [a1, b1] = hypercross::alpha_beta(1);
  CHECK(a1 == doctest::Approx(1.0));
  CHECK(b1 == doctest::Approx(0.0));
  const auto [a3, b3] = hypercross::alpha_beta(3);
  CHECK(a3 == doctest::Approx(1.0 + 0.5 + 1.0 / 3.0));
  CHECK(b3 == doctest::Approx(3.0 - a3));
}

TEST_CASE("circle grids are exact uniform lattices") {
  const PointSet v = hypercross::build_vm(5);
  REQUIRE(v.size() == 5);
  CHECK(v.dim == 1);
  for (Index i = 0; i < 5; ++i)
    CHECK(v.points(i, 0) == doctest::Approx(kTwoPi * double(i) / 5.0));
}

TEST_CASE("level-one set is the base circle grid") {
  hypercross::HypercrossParams p;
  p.n = 4;
  p.d = 1;
  const auto w = hypercross::build_w(p);
  CHECK(w.points.size() == 16);  // ceil(4 * 4)
  CHECK(w.level_sizes == std::vector<std::int64_t>{16});
  CHECK(w.m_sequence.empty());
}

TEST_CASE("recursive levels insert circle values into every slot") {
  hypercross::HypercrossParams p;
  p.n = 4;
  p.d = 2;
  const auto w = hypercross::build_w(p);
  REQUIRE(w.m_sequence.size() == 1);
  REQUIRE(w.level_sizes.size() == 2);
  const std::int64_t m2 = w.m_sequence[0];
  // pre-dedup count is exactly d * M * |W(n, 1)|
  CHECK(w.pre_dedup_sizes.back() == 2 * m2 * w.level_sizes[0]);
  CHECK(w.points.size() == w.level_sizes[1]);
  CHECK(w.points.size() <= w.pre_dedup_sizes.back());
  CHECK(w.points.dim == 2);

  // rows are unique and sorted
  std::set<std::pair<double, double>> seen;
  for (Index i = 0; i < w.points.size(); ++i)
    seen.insert({w.points.points(i, 0), w.points.points(i, 1)});
  CHECK(static_cast<Index>(seen.size()) == w.points.size());

  // M grows when eps tightens
  hypercross::HypercrossParams tight = p;
  tight.eps = p.eps / 4.0;
  CHECK(hypercross::build_w(tight).m_sequence[0] > m2);
}

TEST_CASE("one-dimensional sets norm the cross with a small LP constant") {
  hypercross::HypercrossParams p;
  p.n = 4;
  p.d = 1;
  const auto w = hypercross::build_w(p);
  const auto rep = hypercross::verify_w(4, 1, w.points, 8, 32, 1);
  REQUIRE(rep.bounded);
  CHECK(rep.method == "lp_grid");
  CHECK(rep.c_hat >= 1.0 - 1e-12);
  CHECK(rep.c_hat <= 3.0);
}

TEST_CASE("planar sets give finite constants stable across seeds") {
  hypercross::HypercrossParams p;
  p.n = 4;
  p.d = 2;
  const auto w = hypercross::build_w(p);
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto rep = hypercross::verify_w(4, 2, w.points, 4, 16, seed);
    REQUIRE(rep.bounded);
    CHECK(rep.c_hat > 0.0);
    lo = std::min(lo, rep.c_hat);
    hi = std::max(hi, rep.c_hat);
  }
  CHECK(hi <= 1.5 * lo);  // same point set, same constant up to probe noise
}

TEST_CASE("too-few points are reported as unbounded rather than failing") {
  const PointSet tiny = hypercross::build_vm(2);
  const auto rep = hypercross::verify_w(4, 1, tiny, 8, 8, 1);
  CHECK_FALSE(rep.bounded);
}
