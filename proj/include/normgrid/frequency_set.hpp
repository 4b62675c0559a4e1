#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normgrid/common.hpp"

namespace normgrid {

/// Finite set of integer frequency vectors in Z^dim, stored sorted
/// lexicographically and deduplicated. `kind`/`params` remember how the set
/// was built (for serialization); `explicit_set` is the catch-all.
struct FrequencySet {
  enum class Kind { box, hyperbolic, dyadic_block, lacunary, explicit_set };

  int dim = 0;
  Kind kind = Kind::explicit_set;
  std::vector<std::int64_t> params;
  std::vector<std::vector<std::int64_t>> freqs;

  int size() const { return static_cast<int>(freqs.size()); }
  bool contains(const std::vector<std::int64_t>& k) const;
  /// Closed under negation (k in Q implies -k in Q).
  bool is_symmetric() const;
  /// max_k |k_j| per axis (zeros for an empty set).
  std::vector<std::int64_t> max_abs_per_axis() const;

  static std::string kind_name(Kind k);
  static Kind kind_from_name(const std::string& name);
};

/// Box Pi(N): all k with |k_j| <= N_j. Cardinality prod_j (2 N_j + 1).
FrequencySet build_box(const std::vector<std::int64_t>& n);

/// Hyperbolic cross: all k in Z^dim with prod_j max(|k_j|, 1) <= n.
FrequencySet build_hyperbolic(std::int64_t n, int dim);

/// Dyadic block R(s): |k_j| < 2^{s_j}, i.e. the box with N_j = 2^{s_j} - 1.
FrequencySet build_dyadic_block(const std::vector<std::int64_t>& s);

/// Explicit list; input is sorted and deduplicated.
FrequencySet build_explicit(int dim, std::vector<std::vector<std::int64_t>> freqs);

/// Union with the negated set.
FrequencySet symmetrize(const FrequencySet& q);

}  // namespace normgrid
