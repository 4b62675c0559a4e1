// Acceptance suite: one line per criterion, [PASS]/[FAIL], pinned tolerances.
// Exit code 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "normgrid/certify.hpp"
#include "normgrid/exact.hpp"
#include "normgrid/extremal.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/greedy.hpp"
#include "normgrid/hypercross.hpp"
#include "normgrid/io_json.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/rng.hpp"
#include "normgrid/trig_polynomial.hpp"
#include "normgrid/universal.hpp"
#include "normgrid/weighted_rule.hpp"

using namespace normgrid;

namespace {

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = untimed
  std::function<bool(std::string&)> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Small trig spans of every size 1..6 (boxes only give odd dimensions).
OrthoSystem span_of_size(int n) {
  if (n % 2 == 1) {
    return OrthoSystem::torus_trig(
        build_box(std::vector<std::int64_t>{(n - 1) / 2}));
  }
  std::vector<TrigPolynomial> basis;
  const std::complex<double> i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 1; k <= n / 2; ++k) {
    const FrequencySet pair = build_explicit(1, {{-k}, {k}});
    ComplexVector cos_c(2), sin_c(2);
    cos_c << r, r;
    sin_c << i * r, -i * r;
    basis.emplace_back(pair, cos_c);
    basis.emplace_back(pair, sin_c);
  }
  return OrthoSystem::torus_span(std::move(basis));
}

// Exhaustive dispersion over all candidate boxes; volume accumulated in the
// same fold order as the production recursion so equality can be exact.
double dispersion_oracle(const PointSet& t) {
  const int d = t.dim;
  const Index n = t.size();
  std::vector<std::vector<double>> lows(d), highs(d);
  for (int j = 0; j < d; ++j) {
    std::vector<double> coords(n);
    for (Index i = 0; i < n; ++i) coords[i] = t.points(i, j);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    lows[j] = {0.0};
    lows[j].insert(lows[j].end(), coords.begin(), coords.end());
    highs[j] = coords;
    highs[j].push_back(1.0);
  }
  std::vector<double> lo(d), hi(d);
  double best = 0.0;
  auto rec = [&](auto&& self, int axis) -> void {
    if (axis == d) {
      for (Index i = 0; i < n; ++i) {
        bool inside = true;
        for (int j = 0; j < d; ++j) {
          if (!(t.points(i, j) > lo[j] && t.points(i, j) < hi[j])) {
            inside = false;
            break;
          }
        }
        if (inside) return;
      }
      double vol = 1.0;
      for (int j = d - 1; j >= 0; --j) vol = (hi[j] - lo[j]) * vol;
      best = std::max(best, vol);
      return;
    }
    for (double l : lows[axis]) {
      for (double h : highs[axis]) {
        if (h <= l) continue;
        lo[axis] = l;
        hi[axis] = h;
        self(self, axis + 1);
      }
    }
  };
  rec(rec, 0);
  return best;
}

PointSet random_cube(int m, int d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix pts(m, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform();
  return cube_points(std::move(pts));
}

// ---------------------------------------------------------------- criteria

bool c1_grid_exactness(std::string& detail) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    SplitMix64 rng = SplitMix64::derive(1000, trial);
    const int d = 1 + static_cast<int>(rng.below(3));
    std::vector<std::int64_t> n(d);
    for (int j = 0; j < d; ++j) n[j] = static_cast<std::int64_t>(rng.below(4));
    const FrequencySet q = build_box(n);
    const TrigPolynomial t = TrigPolynomial::random_real(q, rng.next());
    const PointSet grid = canonical_grid(n);
    double acc = 0.0;
    for (Index i = 0; i < grid.size(); ++i) {
      const double v = t.evaluate(grid.point(i)).real();
      acc += v * v;
    }
    acc /= static_cast<double>(grid.size());
    const double want = t.l2_norm_exact() * t.l2_norm_exact();
    const double rel = std::abs(acc - want) / std::max(1e-300, want);
    worst = std::max(worst, rel);
  }
  std::ostringstream ss;
  ss << "100 trials, worst relative error " << worst;
  detail = ss.str();
  return worst <= 1e-10;
}

bool c2_exact_weighted(std::string& detail) {
  double worst = 0.0;
  int checked = 0;
  for (std::int64_t n = 1; n <= 4; ++n) {
    const OrthoSystem sys =
        OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{n}));
    for (int q : {2, 4}) {
      const WeightedRule rule = exact::exact_weighted_discretization(sys, q);
      const int cap = exact::lift_power(sys.size(), q).size();
      if (rule.nodes.size() > cap) {
        detail = "node count exceeds the lifted dimension";
        return false;
      }
      for (int trial = 0; trial < 100; ++trial) {
        SplitMix64 rng = SplitMix64::derive(2000 + 10 * n + q, trial);
        Vector coeffs(sys.size());
        for (Index i = 0; i < coeffs.size(); ++i) coeffs(i) = rng.normal();
        const TrigPolynomial f = sys.combine(coeffs);
        double got = 0.0;
        for (Index j = 0; j < rule.nodes.size(); ++j) {
          got += rule.weights(j) *
                 std::pow(f.evaluate(rule.nodes.point(j)).real(), q);
        }
        const double want = std::pow(lq_norm_grid(f, q, 64), q);
        worst = std::max(worst,
                         std::abs(got - want) / std::max(1.0, std::abs(want)));
        ++checked;
      }
    }
  }
  std::ostringstream ss;
  ss << checked << " integrals, worst relative error " << worst;
  detail = ss.str();
  return worst <= 1e-7;
}

bool c3_tchakaloff(std::string& detail) {
  for (int n = 1; n <= 6; ++n) {
    const OrthoSystem sys = span_of_size(n);
    const WeightedRule input =
        WeightedRule::equal_weight(sys.reference_grid(6));
    // A zero-mean span has an all-zero moment vector, so the empty rule is a
    // valid exact compression; minCoeff is only defined on nonempty weights.
    const auto comp = exact::tchakaloff_compress(sys, input);
    const double comp_min =
        comp.rule.weights.size() > 0 ? comp.rule.weights.minCoeff() : 0.0;
    if (comp.rule.nodes.size() > n || comp_min < -1e-12 ||
        comp.moment_residual > 1e-8) {
      detail = "compression bound violated at span size " + std::to_string(n);
      return false;
    }
    const auto prob = exact::tchakaloff_probability(sys);
    const double prob_min =
        prob.rule.weights.size() > 0 ? prob.rule.weights.minCoeff() : 0.0;
    if (prob.rule.nodes.size() > n + 1 || prob_min < -1e-12 ||
        std::abs(prob.rule.weights.sum() - 1.0) > 1e-10 ||
        prob.moment_residual > 1e-8) {
      detail = "probability variant violated at span size " + std::to_string(n);
      return false;
    }
  }
  detail = "span sizes 1..6: <=N nodes, lambda >= -1e-12, residual <= 1e-8; "
           "probability variant <=N+1 nodes, mass within 1e-10";
  return true;
}

bool c4_rga(std::string& detail) {
  const OrthoSystem sys =
      OrthoSystem::torus_trig(build_box(std::vector<std::int64_t>{5}));
  const auto res = greedy::rga_equal_weight(sys, sys.reference_grid(4), 1000);
  int violations = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 1000; ++k) {
    const double bound = 2.0 / std::sqrt(static_cast<double>(k));
    if (res.trace.residual_norms[k - 1] > bound) ++violations;
    margin = std::min(margin, bound - res.trace.residual_norms[k - 1]);
  }
  std::ostringstream ss;
  ss << "m = 1..1000, violations " << violations << ", smallest margin "
     << margin;
  detail = ss.str();
  return violations == 0;
}

bool c5_oga(std::string& detail) {
  for (int n = 1; n <= 6; ++n) {
    const OrthoSystem sys = span_of_size(n);
    const auto res = greedy::oga_exact_l2(sys, sys.reference_grid(4));
    if (!res.converged || res.final_residual > 1e-7 ||
        res.iterations > n * (n + 1) / 2) {
      detail = "convergence budget exceeded at span size " + std::to_string(n);
      return false;
    }
    const auto cert = certify::certify_l2(sys, res.rule);
    if (std::abs(cert.c1 - 1.0) > 1e-6 || std::abs(cert.c2 - 1.0) > 1e-6) {
      detail = "greedy rule is not exact at span size " + std::to_string(n);
      return false;
    }
  }
  detail = "span sizes 1..6: <= n(n+1)/2 iterations to 1e-7, exact rules";
  return true;
}

bool c6_node_count_law(std::string& detail) {
  // Every rule exact for the doubled space T(2N), whatever produced it, needs
  // at least prod (2 N_j + 1) nodes. Corpus: even-power rules, greedy rules,
  // nonnegative compression on the doubled space.
  int rules = 0;
  auto lower_bound_nodes = [](const std::vector<std::int64_t>& n) {
    std::int64_t p = 1;
    for (auto v : n) p *= 2 * v + 1;
    return p;
  };
  for (const auto& n : std::vector<std::vector<std::int64_t>>{
           {1}, {2}, {3}, {4}, {1, 1}, {2, 1}}) {
    const OrthoSystem sys = OrthoSystem::torus_trig(build_box(n));
    const std::int64_t need = lower_bound_nodes(n);

    const WeightedRule wq = exact::exact_weighted_discretization(sys, 2);
    ++rules;
    if (wq.nodes.size() < need) {
      detail = "even-power rule beats the lower bound";
      return false;
    }

    const auto oga = greedy::oga_exact_l2(sys, sys.reference_grid(4));
    ++rules;
    if (oga.rule.nodes.size() < need) {
      detail = "greedy rule beats the lower bound";
      return false;
    }

    std::vector<std::int64_t> doubled(n);
    for (auto& v : doubled) v *= 2;
    const OrthoSystem big = OrthoSystem::torus_trig(build_box(doubled));
    const auto tch = exact::tchakaloff_probability(big);
    ++rules;
    if (tch.rule.nodes.size() < need) {
      detail = "nonnegative compression beats the lower bound";
      return false;
    }
  }
  std::ostringstream ss;
  ss << rules << " rules across 6 spaces, zero violations";
  detail = ss.str();
  return true;
}

bool c7_witness(std::string& detail) {
  const auto w2 = extremal::gft2_witness(2, 2);
  const auto w4 = extremal::gft2_witness(2, 4);
  std::ostringstream ss;
  ss << "q=2: m=" << w2.m << " residual " << w2.residual_uniform
     << "; q=4: m=" << w4.m << " residual " << w4.residual_uniform;
  detail = ss.str();
  return w2.m == 3 && w2.residual_uniform <= 1e-9 &&
         (w2.lambda.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-9 &&
         w4.m == 5 && w4.residual_uniform <= 1e-9 &&
         (w4.lambda.array() - 1.0 / 5.0).abs().maxCoeff() <= 1e-9;
}

bool c8_dispersion_oracle(std::string& detail) {
  int sets = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PointSet t = random_cube(10 + static_cast<int>(seed * 2), 1, seed);
    if (universal::dispersion(t) != dispersion_oracle(t)) {
      detail = "mismatch in dimension 1";
      return false;
    }
    ++sets;
  }
  for (std::uint64_t seed = 1; seed <= 18; ++seed) {
    const PointSet t =
        random_cube(8 + static_cast<int>(seed * 2), 2, 100 + seed);
    if (universal::dispersion(t) != dispersion_oracle(t)) {
      detail = "mismatch in dimension 2";
      return false;
    }
    ++sets;
  }
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const PointSet t = random_cube(6 + static_cast<int>(seed) % 9, 3,
                                   200 + seed);
    if (universal::dispersion(t) != dispersion_oracle(t)) {
      detail = "mismatch in dimension 3";
      return false;
    }
    ++sets;
  }
  std::ostringstream ss;
  ss << sets << " seeded sets (sizes up to 64, dimensions 1..3), exact "
     << "agreement";
  detail = ss.str();
  return sets == 50;
}

bool c9_nets(std::string& detail) {
  for (int r = 0; r <= 12; ++r) {
    universal::NetParams np;
    np.t = 0;
    np.r = r;
    np.d = 2;
    if (!universal::verify_net(universal::build_hammersley_net(r), np).ok) {
      detail = "hammersley set rejected at r = " + std::to_string(r);
      return false;
    }
  }
  PointSet h = universal::build_hammersley_net(6);
  h.points(2, 1) = std::fmod(h.points(2, 1) + 1.0 / 64.0, 1.0);
  universal::NetParams np;
  np.t = 0;
  np.r = 6;
  np.d = 2;
  const auto check = universal::verify_net(h, np);
  if (check.ok || check.shape.size() != 2 || check.count == 1) {
    detail = "perturbation not detected";
    return false;
  }
  std::ostringstream ss;
  ss << "r <= 12 all pass; perturbed r=6 set fails in box shape ("
     << check.shape[0] << "," << check.shape[1] << ") position ("
     << check.position[0] << "," << check.position[1] << ") with "
     << check.count << " points";
  detail = ss.str();
  return true;
}

bool c10_sidon(std::string& detail) {
  for (std::int64_t n = 1; n <= 50; ++n) {
    const FrequencySet q = extremal::build_sidon_quadratic(n);
    const std::int64_t size = q.size();
    if (size > 3 * n + 1 ||
        size < 3 * n + 1 - static_cast<std::int64_t>(
                               std::floor(std::sqrt(2.0 * n)))) {
      detail = "size window violated at N = " + std::to_string(n);
      return false;
    }
    if (extremal::sidon_coverage_gap(q, n * n) != -1) {
      detail = "coverage gap at N = " + std::to_string(n);
      return false;
    }
    std::set<std::int64_t> diffs;
    for (const auto& a : q.freqs)
      for (const auto& b : q.freqs) diffs.insert(a[0] - b[0]);
    for (std::int64_t j = -n * n; j <= n * n; ++j) {
      if (diffs.count(j) == 0) {
        detail = "difference set misses " + std::to_string(j) + " at N = " +
                 std::to_string(n);
        return false;
      }
    }
  }
  detail = "N = 1..50: size in [3N+1-sqrt(2N), 3N+1], differences cover "
           "[-N^2, N^2] exhaustively";
  return true;
}

bool c11_hypercross(std::string& detail) {
  std::ostringstream ss;
  for (std::int64_t n : {4, 8}) {
    hypercross::HypercrossParams p;
    p.n = n;
    p.d = 2;
    const auto w = hypercross::build_w(p);
    const std::int64_t m2 = w.m_sequence.at(0);
    const std::int64_t w1 = w.level_sizes.at(0);
    if (w.points.size() > 8 * m2 * w1) {
      detail = "size bound |W| <= 8 M |W(N,1)| violated";
      return false;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto rep = hypercross::verify_w(n, 2, w.points, 2, 12, seed);
      if (!rep.bounded || !std::isfinite(rep.c_hat)) {
        detail = "planar constant not finite";
        return false;
      }
      lo = std::min(lo, rep.c_hat);
      hi = std::max(hi, rep.c_hat);
    }
    if (hi > 1.25 * lo) {
      detail = "planar constant unstable across seeds";
      return false;
    }
    ss << "N=" << n << ": |W|=" << w.points.size() << " C(2) in [" << lo
       << ", " << hi << "]; ";
  }
  for (std::int64_t n : {4, 8}) {
    const auto rep1 =
        hypercross::verify_w(n, 1, hypercross::build_vm(4 * n), 8, 16, 1);
    if (!rep1.bounded || rep1.method != "lp_grid" || rep1.c_hat > 3.0) {
      detail = "one-dimensional LP ratio above 3";
      return false;
    }
    ss << "N=" << n << " d=1 LP ratio " << rep1.c_hat << "; ";
  }
  detail = ss.str();
  return true;
}

bool c12_linf_from_l2(std::string& detail) {
  const std::vector<std::vector<std::int64_t>> spaces = {
      {1}, {2}, {3}, {4}, {1, 1}};
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto& n = spaces[seed % spaces.size()];
    const OrthoSystem sys = OrthoSystem::torus_trig(build_box(n));
    const PointSet pts =
        random_torus(6 * sys.size(), static_cast<int>(n.size()), seed);
    const auto l2 = certify::certify_l2(sys, WeightedRule::equal_weight(pts));
    if (l2.c1 <= 0.0) {
      detail = "sampled rule lost rank (seed " + std::to_string(seed) + ")";
      return false;
    }
    const auto rep = certify::certify_linfty(sys, pts, 4);
    if (!rep.bounded) {
      detail = "LP unbounded on a full-rank rule";
      return false;
    }
    const double cap =
        std::sqrt(static_cast<double>(sys.size())) / std::sqrt(l2.c1) + 1e-6;
    worst_slack = std::min(worst_slack, cap - rep.ratio);
    if (rep.ratio > cap) {
      detail = "measured ratio exceeds sqrt(n / C1)";
      return false;
    }
  }
  std::ostringstream ss;
  ss << "20 rules, smallest slack of the sqrt(n/C1) cap " << worst_slack;
  detail = ss.str();
  return true;
}

bool c13_universal(std::string& detail) {
  const int n = 3;
  const auto col = universal::build_collection_dyadic(n, 2);
  const PointSet grid = uniform_grid({1 << (n + 1), 1 << (n + 1)});
  const auto exact_rep = universal::certify_universal(col, grid, 2.0, 16, 1);
  if (!exact_rep.failures.empty() ||
      std::abs(exact_rep.worst_c1 - 1.0) > 1e-10 ||
      std::abs(exact_rep.worst_c2 - 1.0) > 1e-10) {
    detail = "tensor grid does not certify the collection exactly";
    return false;
  }
  int found_c = -1;
  double found_ratio = 0.0;
  for (int c = 0; c <= 3; ++c) {
    const PointSet h = universal::build_hammersley_net(n + c);
    const auto rep = universal::certify_universal(
        col, scale_to_torus(h), std::numeric_limits<double>::infinity(), 16,
        1, 4);
    if (rep.failures.empty() && std::isfinite(rep.worst_ratio)) {
      found_c = c;
      found_ratio = rep.worst_ratio;
      break;
    }
  }
  if (found_c < 0) {
    detail = "no dyadic offset c <= 3 yields a finite worst-member ratio";
    return false;
  }
  std::ostringstream ss;
  ss << "16x16 grid: every member at C1=C2=1 (1e-10); hammersley 2^" << (n + found_c)
     << " points: finite worst-member ratio " << found_ratio << " at c = "
     << found_c;
  detail = ss.str();
  return true;
}

bool c14_determinism(std::string& detail) {
  const char* env = std::getenv("NORMGRID_CLI");
  if (env == nullptr) {
    detail = "NORMGRID_CLI not set";
    return false;
  }
  const std::string cli = env;
  auto slurp = [](const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::vector<std::string> commands = {
      " certify linf --space box:3 --points grid --oversample 4 --seed 11",
      " universal collection --n 2 --d 2 --points uniform:8,8 --q 2 --seed 11",
      " random sample --space box:2 --m 150 --seed 42",
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string a = "/tmp/ng_acc_" + std::to_string(i) + "_t1.json";
    const std::string b = "/tmp/ng_acc_" + std::to_string(i) + "_t4.json";
    if (std::system((cli + commands[i] + " --threads 1 --out " + a).c_str()) !=
            0 ||
        std::system((cli + commands[i] + " --threads 4 --out " + b).c_str()) !=
            0) {
      detail = "command failed: " + commands[i];
      return false;
    }
    const std::string sa = slurp(a), sb = slurp(b);
    if (sa.empty() || sa != sb) {
      detail = "byte mismatch for:" + commands[i];
      return false;
    }
  }
  detail = std::to_string(commands.size()) +
           " commands byte-identical across --threads 1 and --threads 4";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "canonical grid exactness", 5.0, c1_grid_exactness},
      {2, "exact even-power weighted rules", 30.0, c2_exact_weighted},
      {3, "nonnegative compression bounds", 10.0, c3_tchakaloff},
      {4, "relaxed greedy error law", 60.0, c4_rga},
      {5, "orthogonal greedy exactness", 0.0, c5_oga},
      {6, "doubled-space node-count law", 0.0, c6_node_count_law},
      {7, "uniform-weight witness", 0.0, c7_witness},
      {8, "dispersion oracle equivalence", 60.0, c8_dispersion_oracle},
      {9, "digital net verification", 0.0, c9_nets},
      {10, "quadratic difference coverage", 5.0, c10_sidon},
      {11, "hyperbolic-cross point sets", 0.0, c11_hypercross},
      {12, "sup-norm cap from L2 certificates", 0.0, c12_linf_from_l2},
      {13, "universal dyadic collection", 0.0, c13_universal},
      {14, "thread-count determinism", 0.0, c14_determinism},
  };

  int failures = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double dt = seconds_since(t0);
    if (ok && c.time_limit_s > 0.0 && dt > c.time_limit_s) {
      ok = false;
      detail += " [exceeded " + std::to_string(c.time_limit_s) + " s budget]";
    }
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << " ("
         << detail << ") [" << dt << " s]";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
