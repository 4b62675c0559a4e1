#pragma once

#include <string>

#include "json.hpp"

#include "normgrid/certify.hpp"
#include "normgrid/common.hpp"
#include "normgrid/exact.hpp"
#include "normgrid/extremal.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/greedy.hpp"
#include "normgrid/hypercross.hpp"
#include "normgrid/point_set.hpp"
#include "normgrid/sampling.hpp"
#include "normgrid/universal.hpp"
#include "normgrid/weighted_rule.hpp"

namespace normgrid::io {

/// ordered_json keeps insertion order, so serialized reports read in the
/// order fields are documented and dumps are byte-stable.
using json = nlohmann::ordered_json;

/// JSON has no inf/nan literals; encode them as strings, numbers otherwise.
json encode_double(double x);
double decode_double(const json& j);

json vector_json(const Vector& v);
Vector vector_from_json(const json& j);
json matrix_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// round-trippable artifacts
json to_json(const FrequencySet& q);
FrequencySet freqset_from_json(const json& j);
json to_json(const PointSet& p);
PointSet pointset_from_json(const json& j);
json to_json(const WeightedRule& r);
WeightedRule rule_from_json(const json& j);
json to_json(const certify::DiscretizationCertificate& c);
certify::DiscretizationCertificate certificate_from_json(const json& j);

// one-way report serialization
json to_json(const certify::LinftyReport& r);
json to_json(const certify::RemezReport& r);
json to_json(const certify::BernsteinReport& r);
json to_json(const exact::NodeSelection& s);
json to_json(const exact::RecoveryOperator& r);
json to_json(const exact::TchakaloffResult& r);
json to_json(const exact::StableWeightsResult& r);
json to_json(const greedy::OgaResult& r);
json to_json(const greedy::RgaResult& r);
json to_json(const sampling::SamplePlan& p);
json to_json(const sampling::SampleCertified& r);
json to_json(const sampling::SubsetResult& r);
json to_json(const sampling::MonteCarloDomain& r);
json to_json(const hypercross::HypercrossSet& w);
json to_json(const hypercross::VerifyWReport& r);
json to_json(const universal::NetCheck& c);
json to_json(const universal::UniversalReport& r);
json to_json(const universal::SparseReport& r);
json to_json(const universal::DispersionUniversalReport& r);
json to_json(const universal::InverseDispersionReport& r);
json to_json(const extremal::ConditionLParams& p);
json to_json(const extremal::SmallBallReport& r);
json to_json(const extremal::LacunaryRatioReport& r);
json to_json(const extremal::Gft2Witness& w);

/// 2-space indent plus trailing newline; stable across platforms.
std::string dump(const json& j);
void save_json(const std::string& path, const json& j);
json load_json(const std::string& path);

/// CSV projections for tabular consumers (points / weighted rules).
std::string to_csv(const PointSet& p);
std::string to_csv(const WeightedRule& r);

}  // namespace normgrid::io
