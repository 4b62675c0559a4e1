#pragma once

#include <string>
#include <vector>

#include "normgrid/common.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid {

/// Sampling rule: nodes with one weight per node. Tags carry provenance
/// ("grid", "oga", ...) into serialized output; they have no semantics here.
struct WeightedRule {
  PointSet nodes;
  Vector weights;
  std::vector<std::string> tags;

  int size() const { return nodes.size(); }
  double total_mass() const { return weights.sum(); }
  double min_weight() const {
    return weights.size() ? weights.minCoeff() : 0.0;
  }

  static WeightedRule equal_weight(PointSet points, double total_mass = 1.0) {
    WeightedRule r;
    const int m = points.size();
    r.nodes = std::move(points);
    r.weights = Vector::Constant(m, m > 0 ? total_mass / m : 0.0);
    return r;
  }
};

}  // namespace normgrid
