#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "doctest.h"
#include "normgrid/certify.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/io_json.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/weighted_rule.hpp"

using namespace normgrid;
using normgrid::io::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string cli_path() {
  const char* env = std::getenv("NORMGRID_CLI");
  REQUIRE_MESSAGE(env != nullptr,
                  "NORMGRID_CLI must point at the command-line binary");
  return env;
}

}  // namespace

TEST_CASE("frequency sets round-trip byte-identically") {
  for (const FrequencySet& q :
       {build_box({2, 1}), build_hyperbolic(3, 2),
        build_dyadic_block({1, 2}),
        build_explicit(1, {{-4}, {0}, {9}})}) {
    const json j = io::to_json(q);
    const FrequencySet back = io::freqset_from_json(j);
    CHECK(io::dump(io::to_json(back)) == io::dump(j));
    CHECK(back.freqs == q.freqs);
    CHECK(back.kind == q.kind);
  }
}

TEST_CASE("point sets and rules round-trip byte-identically") {
  const PointSet pts = random_torus(7, 2, 5);
  const json jp = io::to_json(pts);
  const PointSet back = io::pointset_from_json(jp);
  CHECK(io::dump(io::to_json(back)) == io::dump(jp));
  CHECK((back.points - pts.points).cwiseAbs().maxCoeff() == 0.0);

  WeightedRule rule = WeightedRule::equal_weight(pts);
  rule.weights(0) = 0.123456789012345678;  // not representable exactly
  const json jr = io::to_json(rule);
  const WeightedRule rback = io::rule_from_json(jr);
  CHECK(io::dump(io::to_json(rback)) == io::dump(jr));
  CHECK(rback.weights(0) == rule.weights(0));  // shortest round-trip floats
}

TEST_CASE("certificates round-trip including non-finite ratios") {
  certify::DiscretizationCertificate cert;
  cert.q = std::numeric_limits<double>::infinity();
  cert.m = 3;
  cert.n = 5;
  cert.c1 = 0.0;
  cert.c2 = 0.0;
  cert.method = "lp_grid";
  cert.unbounded = true;
  cert.ratio = std::numeric_limits<double>::infinity();
  const json j = io::to_json(cert);
  const auto back = io::certificate_from_json(j);
  CHECK(std::isinf(back.ratio));
  CHECK(std::isinf(back.q));
  CHECK(back.unbounded);
  CHECK(io::dump(io::to_json(back)) == io::dump(j));
}

TEST_CASE("empty point sets keep their dimension through json") {
  PointSet empty;
  empty.dim = 3;
  empty.frame = PointSet::Frame::cube;
  empty.points = Matrix::Zero(0, 3);
  const PointSet back = io::pointset_from_json(io::to_json(empty));
  CHECK(back.size() == 0);
  CHECK(back.dim == 3);
}

TEST_CASE("csv flattens one node per row with a trailing weight") {
  const OrthoSystem sys = OrthoSystem::torus_trig(build_box({1, 1}));
  const WeightedRule rule = WeightedRule::equal_weight(sys.reference_grid(1));
  const std::string csv = io::to_csv(rule);
  std::istringstream lines(csv);
  std::string line;
  int rows = 0;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "x0,x1,weight");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == rule.nodes.size());
}

TEST_CASE("cli reports are byte-identical across thread counts") {
  const std::string cli = cli_path();
  const std::string base =
      " certify linf --space box:3 --points grid --oversample 4 --seed 9";
  REQUIRE(run(cli + base + " --threads 1 --out /tmp/ng_t1.json") == 0);
  REQUIRE(run(cli + base + " --threads 4 --out /tmp/ng_t4.json") == 0);
  CHECK(slurp("/tmp/ng_t1.json") == slurp("/tmp/ng_t4.json"));
}

TEST_CASE("cli exit codes distinguish usage, success and failed certification") {
  const std::string cli = cli_path();
  CHECK(run(cli + " no-such-command > /dev/null 2>&1") == 1);
  CHECK(run(cli + " certify l2 > /dev/null 2>&1") == 1);  // missing --space
  CHECK(run(cli + " certify l2 --space box:2 --points grid --out /tmp/ng_ok.json") == 0);
  // three nodes cannot discretize a five-dimensional space: c1 = 0
  CHECK(run(cli +
            " certify l2 --space box:2 --points uniform:3 --out /tmp/ng_bad.json") == 2);
}

TEST_CASE("cli json reports embed the resolved configuration") {
  const std::string cli = cli_path();
  REQUIRE(run(cli + " spaces build --space hyperbolic:3:2 --seed 77"
                    " --out /tmp/ng_cfg.json") == 0);
  const json doc = io::load_json("/tmp/ng_cfg.json");
  REQUIRE(doc.contains("config"));
  CHECK(doc["config"]["seed"].get<std::uint64_t>() == 77);
  CHECK(doc["config"]["command"].get<std::string>() == "spaces build");
  CHECK_FALSE(doc["config"].contains("threads"));
  const FrequencySet q = io::freqset_from_json(doc["report"]);
  CHECK(q.size() == build_hyperbolic(3, 2).size());
}

TEST_CASE("cli point files accept whole reports written by --out") {
  const std::string cli = cli_path();
  REQUIRE(run(cli + " hypercross build --n 4 --d 2 --out /tmp/ng_w42.json") ==
          0);
  // the report wrapper (config + report.points) feeds straight back in
  CHECK(run(cli + " hypercross verify --n 4 --d 2 --points file:/tmp/ng_w42.json"
                  " --out /tmp/ng_w42_verify.json") == 0);
  const json doc = io::load_json("/tmp/ng_w42_verify.json");
  CHECK(doc["report"]["bounded"].get<bool>());
  CHECK(std::isfinite(doc["report"]["c_hat"].get<double>()));
}

TEST_CASE("cli csv output carries nodes and weights") {
  const std::string cli = cli_path();
  REQUIRE(run(cli + " exact tchakaloff --space box:2 --format csv"
                    " --out /tmp/ng_rule.csv") == 0);
  const std::string csv = slurp("/tmp/ng_rule.csv");
  CHECK(csv.rfind("x0,weight", 0) == 0);
  // csv is refused where no tabular projection exists
  CHECK(run(cli + " random plan --n 10 --format csv > /dev/null 2>&1") == 1);
}
