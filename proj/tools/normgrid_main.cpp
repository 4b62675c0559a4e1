#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "normgrid/io_json.hpp"

namespace ng = normgrid;
using ng::io::json;

namespace {

struct GlobalConfig {
  std::uint64_t seed = 1;
  double tol_feasibility = 1e-8;
  std::string out;
  std::string format = "json";
  int threads = 0;  // 0 = NORMGRID_THREADS env var, else 1
  int oversample = 8;
  double min_c1 = 0.0;  // certification threshold for exit code 2
};

int resolve_threads(const GlobalConfig& g) {
  if (g.threads > 0) return g.threads;
  if (const char* env = std::getenv("NORMGRID_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

ng::Tolerances tolerances(const GlobalConfig& g) {
  ng::Tolerances t;
  t.feasibility = g.tol_feasibility;
  return t;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::int64_t> parse_i64_list(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& p : split(s, ',')) out.push_back(std::stoll(p));
  return out;
}

double parse_q(const std::string& s) {
  if (s == "inf" || s == "oo") return std::numeric_limits<double>::infinity();
  return std::stod(s);
}

/// Space specs: box:N1[,N2..] | hyperbolic:N:D | dyadic:S1[,S2..] |
/// trig:K:sincos | walsh:N:LOG2M | file:PATH (freqset JSON).
ng::OrthoSystem parse_space(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& head = parts.front();
  auto arg = [&](std::size_t i) -> const std::string& {
    if (i >= parts.size()) {
      throw std::invalid_argument("space spec " + spec + ": missing field");
    }
    return parts[i];
  };
  if (head == "box") {
    return ng::OrthoSystem::torus_trig(ng::build_box(parse_i64_list(arg(1))));
  }
  if (head == "hyperbolic") {
    return ng::OrthoSystem::torus_trig(
        ng::build_hyperbolic(std::stoll(arg(1)), std::stoi(arg(2))));
  }
  if (head == "dyadic") {
    return ng::OrthoSystem::torus_trig(
        ng::build_dyadic_block(parse_i64_list(arg(1))));
  }
  if (head == "trig") {
    const std::int64_t k = std::stoll(arg(1));
    if (arg(2) != "sincos") {
      throw std::invalid_argument("space spec " + spec + ": expected sincos");
    }
    const ng::FrequencySet pair = ng::build_explicit(1, {{-k}, {k}});
    const std::complex<double> i(0.0, 1.0);
    const double r = 1.0 / std::sqrt(2.0);
    ng::ComplexVector cos_c(2), sin_c(2);
    cos_c << r, r;            // sqrt2 cos(kx)
    sin_c << i * r, -i * r;   // sqrt2 sin(kx)
    std::vector<ng::TrigPolynomial> basis;
    basis.emplace_back(pair, cos_c);
    basis.emplace_back(pair, sin_c);
    return ng::OrthoSystem::torus_span(std::move(basis));
  }
  if (head == "walsh") {
    return ng::OrthoSystem::walsh(std::stoi(arg(1)), std::stoi(arg(2)));
  }
  if (head == "file") {
    return ng::OrthoSystem::torus_trig(
        ng::io::freqset_from_json(ng::io::load_json(arg(1))));
  }
  throw std::invalid_argument("unknown space spec: " + spec);
}

/// Point files may be bare point sets or whole reports written by --out;
/// descend into the report wrapper and its "points" member when present.
json unwrap_points_json(json j) {
  if (j.is_object() && j.contains("report")) j = j.at("report");
  if (j.is_object() && !(j.contains("type") && j.at("type") == "points") &&
      j.contains("points") && j.at("points").is_object()) {
    j = j.at("points");
  }
  return j;
}

/// Point specs: grid | grid:OV | random:M | uniform:M1[,M2..] | file:PATH.
ng::PointSet parse_points(const std::string& spec, const ng::OrthoSystem& sys,
                          const GlobalConfig& g) {
  const auto parts = split(spec, ':');
  const std::string& head = parts.front();
  if (head == "grid") {
    if (sys.kind() == ng::OrthoSystem::Kind::tabulated) {
      return sys.domain_points();
    }
    const int ov = parts.size() > 1 ? std::stoi(parts[1]) : 1;
    return sys.reference_grid(ov);
  }
  if (head == "random") {
    return ng::random_torus(std::stoi(parts.at(1)), sys.point_dim(), g.seed);
  }
  if (head == "uniform") {
    return ng::uniform_grid(parse_i64_list(parts.at(1)));
  }
  if (head == "file") {
    return ng::io::pointset_from_json(
        unwrap_points_json(ng::io::load_json(parts.at(1))));
  }
  throw std::invalid_argument("unknown point spec: " + spec);
}

ng::PointSet load_cube_points(std::string path) {
  if (path.rfind("file:", 0) == 0) path = path.substr(5);
  ng::PointSet p =
      ng::io::pointset_from_json(unwrap_points_json(ng::io::load_json(path)));
  if (p.frame != ng::PointSet::Frame::cube) {
    throw std::invalid_argument(path + ": expected unit-cube points");
  }
  return p;
}

json config_json(const GlobalConfig& g, const std::string& command) {
  // Deliberately excludes --threads and --out: neither changes any computed
  // value, and reports must be byte-identical across thread counts.
  json c;
  c["command"] = command;
  c["seed"] = g.seed;
  c["oversample"] = g.oversample;
  c["format"] = g.format;
  c["min_c1"] = g.min_c1;
  const ng::Tolerances t = tolerances(g);
  json tol;
  tol["feasibility"] = t.feasibility;
  tol["symmetry"] = t.symmetry;
  tol["rank"] = t.rank;
  tol["pivot"] = t.pivot;
  tol["reduced_cost"] = t.reduced_cost;
  c["tol"] = std::move(tol);
  return c;
}

int emit(const GlobalConfig& g, const std::string& command, json payload,
         int code = 0, const std::string* csv = nullptr) {
  std::string text;
  if (g.format == "csv") {
    if (csv == nullptr) {
      std::cerr << "normgrid: " << command << " has no CSV projection\n";
      return 1;
    }
    text = *csv;
  } else {
    json doc;
    doc["config"] = config_json(g, command);
    doc["report"] = std::move(payload);
    text = ng::io::dump(doc);
  }
  if (g.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
      std::cerr << "normgrid: cannot write " << g.out << "\n";
      return 1;
    }
    f << text;
  }
  return code;
}

int below_threshold(const GlobalConfig& g, double c1) {
  if (c1 <= 0.0) return 2;
  if (g.min_c1 > 0.0 && c1 < g.min_c1) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalConfig g;
  int rc = 0;

  CLI::App app{"sampling discretization toolkit: point sets, weights, and "
               "Marcinkiewicz-type certificates for trigonometric and "
               "tabulated orthonormal spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "global RNG seed (all randomness derives from it)");
  app.add_option("--tol", g.tol_feasibility, "feasibility tolerance");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "worker threads (env NORMGRID_THREADS)");
  app.add_option("--oversample", g.oversample, "reference-grid oversampling");
  app.add_option("--min-c1", g.min_c1, "exit 2 when the certified C1 falls below");

  // ---------------------------------------------------------------- spaces
  auto* spaces = app.add_subcommand("spaces", "frequency-set constructions");
  spaces->require_subcommand(1);
  spaces->fallthrough();
  {
    auto* build = spaces->add_subcommand("build", "emit a frequency set");
    build->fallthrough();
    auto spec = std::make_shared<std::string>();
    build->add_option("--space", *spec, "box:N.. | hyperbolic:N:D | dyadic:S..")
        ->required();
    build->callback([&, spec] {
      const auto parts = split(*spec, ':');
      ng::FrequencySet q;
      if (parts.front() == "box") {
        q = ng::build_box(parse_i64_list(parts.at(1)));
      } else if (parts.front() == "hyperbolic") {
        q = ng::build_hyperbolic(std::stoll(parts.at(1)), std::stoi(parts.at(2)));
      } else if (parts.front() == "dyadic") {
        q = ng::build_dyadic_block(parse_i64_list(parts.at(1)));
      } else if (parts.front() == "file") {
        q = ng::io::freqset_from_json(ng::io::load_json(parts.at(1)));
      } else {
        throw std::invalid_argument("unknown space spec: " + *spec);
      }
      rc = emit(g, "spaces build", ng::io::to_json(q));
    });
  }

  // ----------------------------------------------------------------- exact
  auto* exact = app.add_subcommand("exact", "exact rules and recovery");
  exact->require_subcommand(1);
  exact->fallthrough();
  {
    auto* cub = exact->add_subcommand("cubature", "exact rule for the span (or its q-th powers)");
    cub->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto q = std::make_shared<int>(0);
    cub->add_option("--space", *spec)->required();
    cub->add_option("--q", *q, "even power (0 = plain span cubature)");
    cub->callback([&, spec, q] {
      const ng::OrthoSystem sys = parse_space(*spec);
      ng::WeightedRule rule =
          (*q == 0) ? ng::exact::exact_cubature(sys, sys.reference_grid(g.oversample),
                                                tolerances(g))
                    : ng::exact::exact_weighted_discretization(sys, *q, g.oversample,
                                                               tolerances(g));
      const std::string csv = ng::io::to_csv(rule);
      rc = emit(g, "exact cubature", ng::io::to_json(rule), 0, &csv);
    });
  }
  {
    auto* lift = exact->add_subcommand("lift", "power-lift dimensions");
    lift->fallthrough();
    auto n = std::make_shared<int>(1);
    auto q = std::make_shared<int>(2);
    lift->add_option("--n", *n, "base dimension")->required();
    lift->add_option("--q", *q, "power")->required();
    lift->callback([&, n, q] {
      const ng::exact::LiftedSystem ls = ng::exact::lift_power(*n, *q);
      json j;
      j["type"] = "lift";
      j["base_size"] = ls.base_size;
      j["q"] = ls.q;
      j["size"] = ls.size();
      rc = emit(g, "exact lift", std::move(j));
    });
  }
  {
    auto* tch = exact->add_subcommand("tchakaloff", "nonnegative moment compression");
    tch->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto rule_path = std::make_shared<std::string>();
    auto grid = std::make_shared<int>(16);
    tch->add_option("--space", *spec)->required();
    tch->add_option("--rule", *rule_path, "input rule JSON (default: uniform measure)");
    tch->add_option("--grid", *grid, "candidate grid oversampling");
    tch->callback([&, spec, rule_path, grid] {
      const ng::OrthoSystem sys = parse_space(*spec);
      ng::exact::TchakaloffResult res;
      if (rule_path->empty()) {
        res = ng::exact::tchakaloff_probability(sys, {}, *grid, tolerances(g));
      } else {
        res = ng::exact::tchakaloff_compress(
            sys, ng::io::rule_from_json(ng::io::load_json(*rule_path)), *grid,
            tolerances(g));
      }
      const std::string csv = ng::io::to_csv(res.rule);
      rc = emit(g, "exact tchakaloff", ng::io::to_json(res), 0, &csv);
    });
  }
  {
    auto* stab = exact->add_subcommand("stable", "minimal dual-norm exact weights");
    stab->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid");
    auto p = std::make_shared<std::string>("2");
    stab->add_option("--space", *spec)->required();
    stab->add_option("--points", *pts);
    stab->add_option("--p", *p, "1 | 2 | inf");
    stab->callback([&, spec, pts, p] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const ng::PointSet w = parse_points(*pts, sys, g);
      const ng::Vector mu =
          ng::Vector::Constant(w.size(), 1.0 / static_cast<double>(w.size()));
      const auto res = ng::exact::stable_exact_weights(sys, w, mu, parse_q(*p),
                                                       g.oversample, tolerances(g));
      rc = emit(g, "exact stable", ng::io::to_json(res));
    });
  }
  {
    auto* rec = exact->add_subcommand("recover", "dual-basis recovery operator");
    rec->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid:4");
    rec->add_option("--space", *spec)->required();
    rec->add_option("--points", *pts, "candidate points (n best rows are kept)");
    rec->callback([&, spec, pts] {
      const ng::OrthoSystem sys = parse_space(*spec);
      ng::PointSet cand = parse_points(*pts, sys, g);
      if (cand.size() > sys.size()) {
        cand = ng::exact::select_nodes(sys, cand, tolerances(g));
      }
      const auto op = ng::exact::build_recovery(sys, cand, tolerances(g));
      rc = emit(g, "exact recover", ng::io::to_json(op));
    });
  }

  // ---------------------------------------------------------------- greedy
  auto* greedy = app.add_subcommand("greedy", "greedy rule construction");
  greedy->require_subcommand(1);
  greedy->fallthrough();
  {
    auto* oga = greedy->add_subcommand("oga", "orthogonal greedy exact-L2 rule");
    oga->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid:4");
    auto target = std::make_shared<double>(1e-7);
    auto max_iter = std::make_shared<int>(0);
    oga->add_option("--space", *spec)->required();
    oga->add_option("--points", *pts);
    oga->add_option("--target", *target);
    oga->add_option("--max-iter", *max_iter);
    oga->callback([&, spec, pts, target, max_iter] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto res = ng::greedy::oga_exact_l2(sys, parse_points(*pts, sys, g),
                                                *max_iter, *target, 1.0,
                                                tolerances(g));
      const std::string csv = ng::io::to_csv(res.rule);
      rc = emit(g, "greedy oga", ng::io::to_json(res),
                res.converged ? 0 : 2, &csv);
    });
  }
  {
    auto* rga = greedy->add_subcommand("rga", "relaxed greedy equal-weight points");
    rga->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid:4");
    auto m = std::make_shared<int>(0);
    rga->add_option("--space", *spec)->required();
    rga->add_option("--points", *pts);
    rga->add_option("--m", *m, "iterations / selected points")->required();
    rga->callback([&, spec, pts, m] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto res = ng::greedy::rga_equal_weight(sys, parse_points(*pts, sys, g),
                                                    *m, tolerances(g));
      const std::string csv = ng::io::to_csv(res.points);
      rc = emit(g, "greedy rga", ng::io::to_json(res), 0, &csv);
    });
  }

  // ---------------------------------------------------------------- random
  auto* random = app.add_subcommand("random", "random sampling with certificates");
  random->require_subcommand(1);
  random->fallthrough();
  {
    auto* plan = random->add_subcommand("plan", "sample-size plan from tail bounds");
    plan->fallthrough();
    auto n = std::make_shared<int>(1);
    auto t = std::make_shared<double>(1.0);
    auto eps = std::make_shared<double>(0.5);
    auto delta = std::make_shared<double>(0.01);
    plan->add_option("--n", *n)->required();
    plan->add_option("--t", *t);
    plan->add_option("--eps", *eps);
    plan->add_option("--delta", *delta);
    plan->callback([&, n, t, eps, delta] {
      rc = emit(g, "random plan",
                ng::io::to_json(ng::sampling::plan_sample_size(*n, *t, *eps, *delta)));
    });
  }
  {
    auto* sample = random->add_subcommand("sample", "draw m points and certify");
    sample->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto m = std::make_shared<int>(0);
    auto mode = std::make_shared<std::string>("iid");
    auto q = std::make_shared<std::string>("2");
    auto budget = std::make_shared<int>(64);
    sample->add_option("--space", *spec)->required();
    sample->add_option("--m", *m)->required();
    sample->add_option("--mode", *mode)->check(CLI::IsMember({"iid", "grid"}));
    sample->add_option("--q", *q, "2 (exact) | 1 (probe)");
    sample->add_option("--budget", *budget, "q = 1 probe budget");
    sample->callback([&, spec, m, mode, q, budget] {
      const ng::OrthoSystem sys = parse_space(*spec);
      ng::sampling::SampleCertified res;
      if (*q == "1") {
        res = ng::sampling::sample_and_certify_l1(sys, *m, g.seed, *budget,
                                                  g.oversample);
      } else {
        res = ng::sampling::sample_and_certify_l2(
            sys, *m, g.seed,
            *mode == "grid" ? ng::sampling::SampleMode::grid
                            : ng::sampling::SampleMode::iid,
            tolerances(g));
      }
      const std::string csv = ng::io::to_csv(res.points);
      rc = emit(g, "random sample", ng::io::to_json(res),
                below_threshold(g, res.cert.c1), &csv);
    });
  }
  {
    auto* subset = random->add_subcommand("subset", "best random subset of a table");
    subset->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto m = std::make_shared<int>(0);
    auto trials = std::make_shared<int>(32);
    subset->add_option("--space", *spec, "tabulated space, e.g. walsh:8:6")->required();
    subset->add_option("--m", *m)->required();
    subset->add_option("--trials", *trials);
    subset->callback([&, spec, m, trials] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto res = ng::sampling::subset_select_discrete(sys, *m, *trials,
                                                            g.seed, tolerances(g));
      rc = emit(g, "random subset", ng::io::to_json(res),
                below_threshold(g, res.cert.c1));
    });
  }
  {
    auto* domain = random->add_subcommand("domain", "Monte Carlo discrete domain");
    domain->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto delta = std::make_shared<double>(0.5);
    domain->add_option("--space", *spec)->required();
    domain->add_option("--delta", *delta);
    domain->callback([&, spec, delta] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto res = ng::sampling::monte_carlo_domain(sys, *delta, g.seed, 18,
                                                        tolerances(g));
      rc = emit(g, "random domain", ng::io::to_json(res));
    });
  }

  // --------------------------------------------------------------- certify
  auto* certify = app.add_subcommand("certify", "discretization certificates");
  certify->require_subcommand(1);
  certify->fallthrough();
  {
    auto* l2 = certify->add_subcommand("l2", "exact L2 constants");
    l2->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid");
    auto rule_path = std::make_shared<std::string>();
    l2->add_option("--space", *spec)->required();
    l2->add_option("--points", *pts, "equal-weight node spec");
    l2->add_option("--rule", *rule_path, "weighted rule JSON (overrides --points)");
    l2->callback([&, spec, pts, rule_path] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const ng::WeightedRule rule =
          rule_path->empty()
              ? ng::WeightedRule::equal_weight(parse_points(*pts, sys, g))
              : ng::io::rule_from_json(ng::io::load_json(*rule_path));
      const auto cert = ng::certify::certify_l2(sys, rule, tolerances(g));
      rc = emit(g, "certify l2", ng::io::to_json(cert),
                below_threshold(g, cert.c1));
    });
  }
  {
    auto* l1 = certify->add_subcommand("l1", "empirical L1 constants");
    l1->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid");
    auto budget = std::make_shared<int>(64);
    l1->add_option("--space", *spec)->required();
    l1->add_option("--points", *pts);
    l1->add_option("--budget", *budget);
    l1->callback([&, spec, pts, budget] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto cert = ng::certify::certify_l1(
          sys, ng::WeightedRule::equal_weight(parse_points(*pts, sys, g)),
          *budget, g.seed, g.oversample);
      rc = emit(g, "certify l1", ng::io::to_json(cert),
                below_threshold(g, cert.c1));
    });
  }
  {
    auto* linf = certify->add_subcommand("linf", "LP sup-norm ratio");
    linf->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto pts = std::make_shared<std::string>("grid");
    linf->add_option("--space", *spec)->required();
    linf->add_option("--points", *pts);
    linf->callback([&, spec, pts] {
      const ng::OrthoSystem sys = parse_space(*spec);
      const auto rep = ng::certify::certify_linfty(
          sys, parse_points(*pts, sys, g), g.oversample, tolerances(g),
          resolve_threads(g));
      rc = emit(g, "certify linf", ng::io::to_json(rep),
                rep.bounded ? below_threshold(g, rep.cert.c1) : 2);
    });
  }
  {
    auto* remez = certify->add_subcommand("remez", "sup-norm vs cut grid set");
    remez->fallthrough();
    auto spec = std::make_shared<std::string>();
    auto fraction = std::make_shared<double>(0.1);
    auto trials = std::make_shared<int>(32);
    remez->add_option("--space", *spec)->required();
    remez->add_option("--fraction", *fraction);
    remez->add_option("--trials", *trials);
    remez->callback([&, spec, fraction, trials] {
      const auto parts = split(*spec, ':');
      ng::FrequencySet q;
      if (parts.front() == "box") {
        q = ng::build_box(parse_i64_list(parts.at(1)));
      } else if (parts.front() == "hyperbolic") {
        q = ng::build_hyperbolic(std::stoll(parts.at(1)), std::stoi(parts.at(2)));
      } else {
        throw std::invalid_argument("remez: box or hyperbolic spaces only");
      }
      const auto rep =
          ng::certify::remez_check(q, *fraction, *trials, g.seed, g.oversample);
      rc = emit(g, "certify remez", ng::io::to_json(rep));
    });
  }
  {
    auto* bern = certify->add_subcommand("bernstein", "mixed-derivative constant");
    bern->fallthrough();
    auto n = std::make_shared<std::int64_t>(4);
    auto dim = std::make_shared<int>(1);
    auto trials = std::make_shared<int>(32);
    bern->add_option("--n", *n)->required();
    bern->add_option("--dim", *dim);
    bern->add_option("--trials", *trials);
    bern->callback([&, n, dim, trials] {
      const auto rep =
          ng::certify::bernstein_probe(*n, *dim, *trials, g.seed, g.oversample);
      rc = emit(g, "certify bernstein", ng::io::to_json(rep));
    });
  }

  // ------------------------------------------------------------ hypercross
  auto* hyper = app.add_subcommand("hypercross", "sup-norm point sets for hyperbolic crosses");
  hyper->require_subcommand(1);
  hyper->fallthrough();
  {
    auto* build = hyper->add_subcommand("build", "recursive W(n,d) set");
    build->fallthrough();
    auto n = std::make_shared<std::int64_t>(4);
    auto d = std::make_shared<int>(1);
    auto eps = std::make_shared<double>(0.1);
    auto c0 = std::make_shared<double>(4.0);
    auto factor = std::make_shared<double>(4.0);
    build->add_option("--n", *n)->required();
    build->add_option("--d", *d)->required();
    build->add_option("--eps", *eps);
    build->add_option("--c0", *c0);
    build->add_option("--base-factor", *factor);
    build->callback([&, n, d, eps, c0, factor] {
      ng::hypercross::HypercrossParams p;
      p.n = *n;
      p.d = *d;
      p.eps = *eps;
      p.c0 = *c0;
      p.base_grid_factor = *factor;
      const auto w = ng::hypercross::build_w(p);
      const std::string csv = ng::io::to_csv(w.points);
      rc = emit(g, "hypercross build", ng::io::to_json(w), 0, &csv);
    });
  }
  {
    auto* verify = hyper->add_subcommand("verify", "sup-norm constant of a W set");
    verify->fallthrough();
    auto n = std::make_shared<std::int64_t>(4);
    auto d = std::make_shared<int>(1);
    auto pts = std::make_shared<std::string>();
    auto trials = std::make_shared<int>(64);
    verify->add_option("--n", *n)->required();
    verify->add_option("--d", *d)->required();
    verify->add_option("--points", *pts, "file:PATH (torus points)")->required();
    verify->add_option("--trials", *trials);
    verify->callback([&, n, d, pts, trials] {
      const auto parts = split(*pts, ':');
      if (parts.front() != "file") {
        throw std::invalid_argument("hypercross verify: --points file:PATH");
      }
      const ng::PointSet w = ng::io::pointset_from_json(
          unwrap_points_json(ng::io::load_json(parts.at(1))));
      const auto rep =
          ng::hypercross::verify_w(*n, *d, w, g.oversample, *trials, g.seed,
                                   tolerances(g), resolve_threads(g));
      rc = emit(g, "hypercross verify", ng::io::to_json(rep),
                rep.bounded ? 0 : 2);
    });
  }

  // ------------------------------------------------------------- universal
  auto* universal = app.add_subcommand("universal", "one set, many subspaces");
  universal->require_subcommand(1);
  universal->fallthrough();
  {
    auto* disp = universal->add_subcommand("dispersion", "largest empty box");
    disp->fallthrough();
    auto pts = std::make_shared<std::string>();
    auto sweep = std::make_shared<double>(0.0);
    auto fit_n = std::make_shared<int>(-1);
    auto hammersley = std::make_shared<int>(-1);
    disp->add_option("--points", *pts, "unit-cube point set JSON");
    disp->add_option("--hammersley", *hammersley,
                     "measure the 2^r-point Hammersley net instead");
    disp->add_option("--sweep-threshold", *sweep,
                     "also sweep dyadic levels c = 0..3 (d = 2, |T| = 2^r)");
    disp->add_option("--fit-n", *fit_n, "report dispersion * 2^n");
    disp->callback([&, pts, sweep, fit_n, hammersley] {
      if (pts->empty() && *hammersley < 0) {
        throw std::invalid_argument(
            "universal dispersion: --points or --hammersley");
      }
      const ng::PointSet t = *hammersley >= 0
                                 ? ng::universal::build_hammersley_net(*hammersley)
                                 : load_cube_points(*pts);
      if (*sweep > 0.0) {
        const auto rep = ng::universal::dispersion_implies_universal_check(
            t, *sweep, tolerances(g), resolve_threads(g));
        rc = emit(g, "universal dispersion", ng::io::to_json(rep),
                  rep.smallest_c >= 0 ? 0 : 2);
      } else if (*fit_n >= 0) {
        const auto rep =
            ng::universal::universal_implies_dispersion_check(t, *fit_n);
        rc = emit(g, "universal dispersion", ng::io::to_json(rep));
      } else {
        json j;
        j["type"] = "dispersion";
        j["m"] = t.size();
        j["d"] = t.dim;
        j["value"] = ng::universal::dispersion(t);
        rc = emit(g, "universal dispersion", std::move(j));
      }
    });
  }
  {
    auto* net = universal->add_subcommand("net", "digital-net verification");
    net->fallthrough();
    auto pts = std::make_shared<std::string>();
    auto t = std::make_shared<int>(0);
    auto r = std::make_shared<int>(0);
    auto hammersley = std::make_shared<int>(-1);
    net->add_option("--points", *pts, "unit-cube point set JSON");
    net->add_option("--t", *t);
    net->add_option("--r", *r);
    net->add_option("--hammersley", *hammersley,
                    "build + verify the 2^r-point Hammersley net instead");
    net->callback([&, pts, t, r, hammersley] {
      ng::PointSet p;
      int rr = *r;
      if (*hammersley >= 0) {
        rr = *hammersley;
        p = ng::universal::build_hammersley_net(rr);
      } else {
        if (pts->empty()) {
          throw std::invalid_argument("universal net: --points or --hammersley");
        }
        p = load_cube_points(*pts);
      }
      ng::universal::NetParams np;
      np.t = *t;
      np.r = rr;
      np.d = p.dim;
      const auto check = ng::universal::verify_net(p, np);
      rc = emit(g, "universal net", ng::io::to_json(check), check.ok ? 0 : 2);
    });
  }
  {
    auto* col = universal->add_subcommand("collection", "certify every dyadic member");
    col->fallthrough();
    auto n = std::make_shared<int>(2);
    auto d = std::make_shared<int>(2);
    auto pts = std::make_shared<std::string>();
    auto q = std::make_shared<std::string>("2");
    auto budget = std::make_shared<int>(32);
    col->add_option("--n", *n)->required();
    col->add_option("--d", *d)->required();
    col->add_option("--points", *pts, "uniform:M1,M2 | random:M | file:PATH")->required();
    col->add_option("--q", *q, "1 | 2 | inf");
    col->add_option("--budget", *budget);
    col->callback([&, n, d, pts, q, budget] {
      const auto collection = ng::universal::build_collection_dyadic(*n, *d);
      // points parsed against a box system of the right dimension
      const ng::OrthoSystem probe_sys = ng::OrthoSystem::torus_trig(
          ng::build_box(std::vector<std::int64_t>(static_cast<std::size_t>(*d), 1)));
      ng::PointSet p = parse_points(*pts, probe_sys, g);
      if (p.frame == ng::PointSet::Frame::cube) p = ng::scale_to_torus(p);
      const auto rep = ng::universal::certify_universal(
          collection, p, parse_q(*q), *budget, g.seed, g.oversample,
          tolerances(g), resolve_threads(g));
      rc = emit(g, "universal collection", ng::io::to_json(rep),
                rep.failures.empty() ? 0 : 2);
    });
  }
  {
    auto* sparse = universal->add_subcommand("sparse", "random members of S(v, n)");
    sparse->fallthrough();
    auto v = std::make_shared<int>(2);
    auto n = std::make_shared<int>(2);
    auto d = std::make_shared<int>(1);
    auto q = std::make_shared<std::string>("2");
    auto m = std::make_shared<int>(0);
    auto samples = std::make_shared<int>(64);
    auto budget = std::make_shared<int>(32);
    sparse->add_option("--v", *v)->required();
    sparse->add_option("--n", *n)->required();
    sparse->add_option("--d", *d);
    sparse->add_option("--q", *q, "1 | 2");
    sparse->add_option("--m", *m)->required();
    sparse->add_option("--samples", *samples);
    sparse->add_option("--budget", *budget);
    sparse->callback([&, v, n, d, q, m, samples, budget] {
      const auto rep = ng::universal::universal_random_for_sparse(
          *v, *n, *d, parse_q(*q), *m, g.seed, *samples, *budget, tolerances(g));
      rc = emit(g, "universal sparse", ng::io::to_json(rep),
                below_threshold(g, rep.min_c1));
    });
  }

  // -------------------------------------------------------------- extremal
  auto* extremal = app.add_subcommand("extremal", "lower-bound witnesses");
  extremal->require_subcommand(1);
  extremal->fallthrough();
  {
    auto* sidon = extremal->add_subcommand("sidon", "quadratic difference-cover set");
    sidon->fallthrough();
    auto n = std::make_shared<std::int64_t>(1);
    auto limit = std::make_shared<std::int64_t>(-1);
    sidon->add_option("--n", *n)->required();
    sidon->add_option("--limit", *limit, "coverage check bound (default N^2)");
    sidon->callback([&, n, limit] {
      const ng::FrequencySet q = ng::extremal::build_sidon_quadratic(*n);
      const std::int64_t bound = *limit >= 0 ? *limit : (*n) * (*n);
      json j;
      j["type"] = "sidon";
      j["n"] = *n;
      j["size"] = q.size();
      j["coverage_limit"] = bound;
      j["coverage_gap"] = ng::extremal::sidon_coverage_gap(q, bound);
      j["freqset"] = ng::io::to_json(q);
      rc = emit(g, "extremal sidon", std::move(j));
    });
  }
  {
    auto* lac = extremal->add_subcommand("lacunary", "Condition L ladders and sup-norm ratios");
    lac->fallthrough();
    auto n = std::make_shared<int>(4);
    auto b = std::make_shared<double>(2.0);
    auto nu = std::make_shared<std::int64_t>(0);
    auto big_k = std::make_shared<double>(1.0);
    auto minimal = std::make_shared<bool>(false);
    auto budgets = std::make_shared<std::vector<int>>();
    lac->add_option("--n", *n)->required();
    lac->add_option("--b", *b);
    lac->add_option("--nu", *nu);
    lac->add_option("--K", *big_k);
    lac->add_flag("--minimal", *minimal, "slow-growth ladder");
    lac->add_option("--budgets", *budgets, "node counts for the ratio probe");
    lac->callback([&, n, b, nu, big_k, minimal, budgets] {
      const ng::extremal::ConditionLParams params =
          *minimal ? ng::extremal::build_condition_l_minimal(*n, *b, *nu, *big_k)
                   : ng::extremal::build_condition_l(*n, *b, *nu, *big_k);
      if (budgets->empty()) {
        rc = emit(g, "extremal lacunary", ng::io::to_json(params));
      } else {
        const auto rep = ng::extremal::lacunary_ratio_probe(
            params, *budgets, g.seed, g.oversample, tolerances(g),
            resolve_threads(g));
        rc = emit(g, "extremal lacunary", ng::io::to_json(rep));
      }
    });
  }
  {
    auto* ball = extremal->add_subcommand("smallball", "block-L1 vs sup-norm probe");
    ball->fallthrough();
    auto n = std::make_shared<int>(4);
    auto b = std::make_shared<double>(2.0);
    auto nu = std::make_shared<std::int64_t>(0);
    auto big_k = std::make_shared<double>(1.0);
    auto minimal = std::make_shared<bool>(false);
    auto trials = std::make_shared<int>(32);
    ball->add_option("--n", *n)->required();
    ball->add_option("--b", *b);
    ball->add_option("--nu", *nu);
    ball->add_option("--K", *big_k);
    ball->add_flag("--minimal", *minimal);
    ball->add_option("--trials", *trials);
    ball->callback([&, n, b, nu, big_k, minimal, trials] {
      const ng::extremal::ConditionLParams params =
          *minimal ? ng::extremal::build_condition_l_minimal(*n, *b, *nu, *big_k)
                   : ng::extremal::build_condition_l(*n, *b, *nu, *big_k);
      const auto rep = ng::extremal::small_ball_probe(params, *trials, g.seed);
      rc = emit(g, "extremal smallball", ng::io::to_json(rep));
    });
  }
  {
    auto* wit = extremal->add_subcommand("witness", "uniform-weight monomial witness");
    wit->fallthrough();
    auto n = std::make_shared<int>(2);
    auto q = std::make_shared<int>(2);
    wit->add_option("--n", *n)->required();
    wit->add_option("--q", *q)->required();
    wit->callback([&, n, q] {
      const auto rep = ng::extremal::gft2_witness(*n, *q, g.seed, tolerances(g));
      rc = emit(g, "extremal witness", ng::io::to_json(rep));
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "normgrid: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
