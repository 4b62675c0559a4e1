#include "normgrid/io_json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace normgrid::io {

namespace {

std::string shortest(double x) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf, res.ptr);
}

}  // namespace

json encode_double(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double decode_double(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("decode_double: unrecognized value " + s);
  }
  return j.get<double>();
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& e : j) v[i++] = decode_double(e);
  return v;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = static_cast<Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix_from_json: ragged rows");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = decode_double(row.at(static_cast<std::size_t>(c)));
    }
  }
  return m;
}

json to_json(const FrequencySet& q) {
  json j;
  j["type"] = "freqset";
  j["dim"] = q.dim;
  j["kind"] = FrequencySet::kind_name(q.kind);
  j["params"] = q.params;
  j["freqs"] = q.freqs;
  return j;
}

FrequencySet freqset_from_json(const json& j) {
  if (j.at("type") != "freqset") throw std::invalid_argument("not a freqset");
  FrequencySet q;
  q.dim = j.at("dim").get<int>();
  q.kind = FrequencySet::kind_from_name(j.at("kind").get<std::string>());
  q.params = j.at("params").get<std::vector<std::int64_t>>();
  q.freqs = j.at("freqs").get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& k : q.freqs) {
    if (static_cast<int>(k.size()) != q.dim) {
      throw std::invalid_argument("freqset_from_json: dim mismatch");
    }
  }
  return q;
}

json to_json(const PointSet& p) {
  json j;
  j["type"] = "points";
  j["dim"] = p.dim;
  j["frame"] = PointSet::frame_name(p.frame);
  j["points"] = matrix_json(p.points);
  return j;
}

PointSet pointset_from_json(const json& j) {
  if (j.at("type") != "points") throw std::invalid_argument("not a point set");
  PointSet p;
  p.dim = j.at("dim").get<int>();
  p.frame = PointSet::frame_from_name(j.at("frame").get<std::string>());
  p.points = matrix_from_json(j.at("points"));
  if (p.points.rows() > 0 && p.points.cols() != p.dim) {
    throw std::invalid_argument("pointset_from_json: dim mismatch");
  }
  if (p.points.rows() == 0) p.points.resize(0, p.dim);
  return p;
}

json to_json(const WeightedRule& r) {
  json j;
  j["type"] = "rule";
  j["nodes"] = to_json(r.nodes);
  j["weights"] = vector_json(r.weights);
  j["tags"] = r.tags;
  return j;
}

WeightedRule rule_from_json(const json& j) {
  if (j.at("type") != "rule") throw std::invalid_argument("not a rule");
  WeightedRule r;
  r.nodes = pointset_from_json(j.at("nodes"));
  r.weights = vector_from_json(j.at("weights"));
  r.tags = j.at("tags").get<std::vector<std::string>>();
  if (r.weights.size() != r.nodes.size()) {
    throw std::invalid_argument("rule_from_json: weight count mismatch");
  }
  return r;
}

json to_json(const certify::DiscretizationCertificate& c) {
  json j;
  j["type"] = "certificate";
  j["q"] = encode_double(c.q);
  j["m"] = c.m;
  j["n"] = c.n;
  j["c1"] = encode_double(c.c1);
  j["c2"] = encode_double(c.c2);
  j["method"] = c.method;
  j["empirical"] = c.empirical;
  j["unbounded"] = c.unbounded;
  j["ratio"] = encode_double(c.ratio);
  j["seed"] = c.seed;
  j["tol_feasibility"] = c.tol_feasibility;
  return j;
}

certify::DiscretizationCertificate certificate_from_json(const json& j) {
  if (j.at("type") != "certificate") {
    throw std::invalid_argument("not a certificate");
  }
  certify::DiscretizationCertificate c;
  c.q = decode_double(j.at("q"));
  c.m = j.at("m").get<int>();
  c.n = j.at("n").get<int>();
  c.c1 = decode_double(j.at("c1"));
  c.c2 = decode_double(j.at("c2"));
  c.method = j.at("method").get<std::string>();
  c.empirical = j.at("empirical").get<bool>();
  c.unbounded = j.at("unbounded").get<bool>();
  c.ratio = decode_double(j.at("ratio"));
  c.seed = j.at("seed").get<std::uint64_t>();
  c.tol_feasibility = j.at("tol_feasibility").get<double>();
  return c;
}

json to_json(const certify::LinftyReport& r) {
  json j;
  j["type"] = "linfty_report";
  j["ratio"] = encode_double(r.ratio);
  j["bounded"] = r.bounded;
  j["worst_point"] = vector_json(r.worst_point);
  j["cert"] = to_json(r.cert);
  return j;
}

json to_json(const certify::RemezReport& r) {
  json j;
  j["type"] = "remez_report";
  j["max_ratio"] = r.max_ratio;
  j["measure_fraction"] = r.measure_fraction;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["ratios"] = r.ratios;
  return j;
}

json to_json(const certify::BernsteinReport& r) {
  json j;
  j["type"] = "bernstein_report";
  j["c_hat"] = r.c_hat;
  j["n"] = r.n;
  j["dim"] = r.dim;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  return j;
}

json to_json(const exact::NodeSelection& s) {
  json j;
  j["type"] = "node_selection";
  j["indices"] = s.indices;
  j["det"] = encode_double(s.det);
  j["scaled_det"] = encode_double(s.scaled_det);
  return j;
}

json to_json(const exact::RecoveryOperator& r) {
  json j;
  j["type"] = "recovery";
  j["nodes"] = to_json(r.nodes);
  j["dual_coeffs"] = matrix_json(r.dual_coeffs);
  return j;
}

json to_json(const exact::TchakaloffResult& r) {
  json j;
  j["type"] = "tchakaloff";
  j["rule"] = to_json(r.rule);
  j["moment_residual"] = r.moment_residual;
  j["nnls_iterations"] = r.nnls_iterations;
  return j;
}

json to_json(const exact::StableWeightsResult& r) {
  json j;
  j["type"] = "stable_weights";
  j["lambda"] = vector_json(r.lambda);
  j["stability_norm"] = r.stability_norm;
  j["measured_c1"] = encode_double(r.measured_c1);
  j["c1_empirical"] = r.c1_empirical;
  j["p"] = encode_double(r.p);
  j["p_dual"] = encode_double(r.p_dual);
  return j;
}

json to_json(const greedy::OgaResult& r) {
  json j;
  j["type"] = "oga";
  j["rule"] = to_json(r.rule);
  j["iterations"] = r.iterations;
  j["final_residual"] = r.final_residual;
  j["converged"] = r.converged;
  j["residual_trace"] = r.trace.residual_norms;
  j["selected"] = r.trace.selected;
  return j;
}

json to_json(const greedy::RgaResult& r) {
  json j;
  j["type"] = "rga";
  j["points"] = to_json(r.points);
  j["final_error"] = r.final_error;
  j["b"] = r.b;
  j["error_trace"] = r.trace.residual_norms;
  j["selected"] = r.trace.selected;
  return j;
}

json to_json(const sampling::SamplePlan& p) {
  json j;
  j["type"] = "sample_plan";
  j["n"] = p.n;
  j["t"] = p.t;
  j["eps"] = p.eps;
  j["delta"] = p.delta;
  j["m"] = p.m;
  j["r"] = p.r;
  j["derived_c"] = p.derived_c;
  return j;
}

json to_json(const sampling::SampleCertified& r) {
  json j;
  j["type"] = "sample_certified";
  j["points"] = to_json(r.points);
  j["cert"] = to_json(r.cert);
  return j;
}

json to_json(const sampling::SubsetResult& r) {
  json j;
  j["type"] = "subset";
  j["indices"] = r.indices;
  j["best_trial"] = r.best_trial;
  j["cert"] = to_json(r.cert);
  return j;
}

json to_json(const sampling::MonteCarloDomain& r) {
  json j;
  j["type"] = "monte_carlo_domain";
  j["m"] = r.m;
  j["rounds"] = r.rounds;
  j["delta"] = r.delta;
  j["achieved_offdiag"] = r.achieved_offdiag;
  j["fourth_moment"] = r.fourth_moment;
  j["cert"] = to_json(r.cert);
  j["sample_points"] = to_json(r.sample_points);
  return j;
}

json to_json(const hypercross::HypercrossSet& w) {
  json j;
  j["type"] = "hypercross_set";
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  j["m_sequence"] = w.m_sequence;
  j["pre_dedup_sizes"] = w.pre_dedup_sizes;
  j["level_sizes"] = w.level_sizes;
  j["points"] = to_json(w.points);
  return j;
}

json to_json(const hypercross::VerifyWReport& r) {
  json j;
  j["type"] = "verify_w";
  j["c_hat"] = encode_double(r.c_hat);
  j["bounded"] = r.bounded;
  j["method"] = r.method;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["refgrid_oversample"] = r.refgrid_oversample;
  return j;
}

json to_json(const universal::NetCheck& c) {
  json j;
  j["type"] = "net_check";
  j["ok"] = c.ok;
  j["shape"] = c.shape;
  j["position"] = c.position;
  j["count"] = c.count;
  return j;
}

json to_json(const universal::UniversalReport& r) {
  json j;
  j["type"] = "universal_report";
  j["q"] = encode_double(r.q);
  j["m"] = r.m;
  j["worst_c1"] = encode_double(r.worst_c1);
  j["worst_c2"] = encode_double(r.worst_c2);
  j["worst_ratio"] = encode_double(r.worst_ratio);
  j["argmin_member"] = r.argmin_member;
  j["failures"] = r.failures;
  j["seed"] = r.seed;
  json members = json::array();
  for (const auto& o : r.outcomes) {
    json e;
    e["member"] = o.member;
    e["ok"] = o.ok;
    e["error"] = o.error;
    e["cert"] = to_json(o.cert);
    members.push_back(std::move(e));
  }
  j["members"] = std::move(members);
  return j;
}

json to_json(const universal::SparseReport& r) {
  json j;
  j["type"] = "sparse_report";
  j["v"] = r.v;
  j["n"] = r.n;
  j["d"] = r.d;
  j["q"] = encode_double(r.q);
  j["m"] = r.m;
  j["enumerated"] = r.enumerated;
  j["members_checked"] = r.members_checked;
  j["min_c1"] = encode_double(r.min_c1);
  j["max_c2"] = encode_double(r.max_c2);
  j["failure_fraction"] = r.failure_fraction;
  j["theory_m"] = r.theory_m;
  j["seed"] = r.seed;
  return j;
}

json to_json(const universal::DispersionUniversalReport& r) {
  json j;
  j["type"] = "dispersion_universal";
  j["r"] = r.r;
  j["dispersion"] = r.dispersion_value;
  json ratios = json::array();
  for (double x : r.ratios) ratios.push_back(encode_double(x));
  j["ratios"] = std::move(ratios);
  j["smallest_c"] = r.smallest_c;
  j["threshold"] = r.threshold;
  return j;
}

json to_json(const universal::InverseDispersionReport& r) {
  json j;
  j["type"] = "universal_dispersion";
  j["n"] = r.n;
  j["dispersion"] = r.dispersion_value;
  j["fitted_c"] = r.fitted_c;
  return j;
}

json to_json(const extremal::ConditionLParams& p) {
  json j;
  j["type"] = "condition_l";
  j["n"] = p.n;
  j["b"] = p.b;
  j["K"] = p.big_k;
  j["nu"] = p.nu;
  j["k_values"] = p.k_values;
  return j;
}

json to_json(const extremal::SmallBallReport& r) {
  json j;
  j["type"] = "small_ball";
  j["c_hat"] = r.c_hat;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["best_trial"] = r.best_trial;
  j["best_mode"] = r.best_mode;
  j["ratios"] = r.ratios;
  return j;
}

json to_json(const extremal::LacunaryRatioReport& r) {
  json j;
  j["type"] = "lacunary_ratio";
  j["n_freq"] = r.n_freq;
  j["seed"] = r.seed;
  json rows = json::array();
  for (const auto& row : r.rows) {
    json e;
    e["family"] = row.family;
    e["m"] = row.m;
    e["ratio"] = encode_double(row.ratio);
    e["bounded"] = row.bounded;
    e["ratio_over_sqrt_n"] = encode_double(row.ratio_over_sqrt_n);
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const extremal::Gft2Witness& w) {
  json j;
  j["type"] = "gft2_witness";
  j["n_vars"] = w.n_vars;
  j["q"] = w.q;
  j["m"] = w.m;
  j["nodes"] = matrix_json(w.nodes);
  j["lambda"] = vector_json(w.lambda);
  j["residual_uniform"] = w.residual_uniform;
  j["scaled_det"] = w.scaled_det;
  j["seed"] = w.seed;
  j["attempts"] = w.attempts;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << dump(j);
  if (!out) throw std::runtime_error("write failed: " + path);
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json j;
  in >> j;
  return j;
}

std::string to_csv(const PointSet& p) {
  std::string out;
  for (int c = 0; c < p.dim; ++c) {
    if (c) out += ',';
    out += "x" + std::to_string(c);
  }
  out += '\n';
  for (Index r = 0; r < p.points.rows(); ++r) {
    for (Index c = 0; c < p.points.cols(); ++c) {
      if (c) out += ',';
      out += shortest(p.points(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string to_csv(const WeightedRule& r) {
  std::string out;
  for (int c = 0; c < r.nodes.dim; ++c) out += "x" + std::to_string(c) + ",";
  out += "weight\n";
  for (Index i = 0; i < r.nodes.points.rows(); ++i) {
    for (Index c = 0; c < r.nodes.points.cols(); ++c) {
      out += shortest(r.nodes.points(i, c));
      out += ',';
    }
    out += shortest(r.weights[i]);
    out += '\n';
  }
  return out;
}

}  // namespace normgrid::io
