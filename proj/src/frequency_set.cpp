#include "normgrid/frequency_set.hpp"

#include <algorithm>
#include <cstdlib>

namespace normgrid {

namespace {

void sort_unique(std::vector<std::vector<std::int64_t>>& freqs) {
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
}

}  // namespace

bool FrequencySet::contains(const std::vector<std::int64_t>& k) const {
  return std::binary_search(freqs.begin(), freqs.end(), k);
}

bool FrequencySet::is_symmetric() const {
  std::vector<std::int64_t> neg(dim);
  for (const auto& k : freqs) {
    for (int j = 0; j < dim; ++j) neg[j] = -k[j];
    if (!contains(neg)) return false;
  }
  return true;
}

std::vector<std::int64_t> FrequencySet::max_abs_per_axis() const {
  std::vector<std::int64_t> out(dim, 0);
  for (const auto& k : freqs)
    for (int j = 0; j < dim; ++j)
      out[j] = std::max(out[j], std::abs(k[j]));
  return out;
}

std::string FrequencySet::kind_name(Kind k) {
  switch (k) {
    case Kind::box: return "box";
    case Kind::hyperbolic: return "hyperbolic";
    case Kind::dyadic_block: return "dyadic_block";
    case Kind::lacunary: return "lacunary";
    case Kind::explicit_set: return "explicit";
  }
  return "explicit";
}

FrequencySet::Kind FrequencySet::kind_from_name(const std::string& name) {
  if (name == "box") return Kind::box;
  if (name == "hyperbolic") return Kind::hyperbolic;
  if (name == "dyadic_block") return Kind::dyadic_block;
  if (name == "lacunary") return Kind::lacunary;
  if (name == "explicit") return Kind::explicit_set;
  throw std::invalid_argument("unknown frequency set kind: " + name);
}

FrequencySet build_box(const std::vector<std::int64_t>& n) {
  if (n.empty()) throw std::invalid_argument("build_box: dimension 0");
  for (auto v : n)
    if (v < 0) throw std::invalid_argument("build_box: negative extent");

  FrequencySet q;
  q.dim = static_cast<int>(n.size());
  q.kind = FrequencySet::Kind::box;
  q.params = n;

  std::vector<std::int64_t> k(q.dim);
  for (int j = 0; j < q.dim; ++j) k[j] = -n[j];
  while (true) {
    q.freqs.push_back(k);
    int axis = q.dim - 1;
    while (axis >= 0 && k[axis] == n[axis]) {
      k[axis] = -n[axis];
      --axis;
    }
    if (axis < 0) break;
    ++k[axis];
  }
  sort_unique(q.freqs);
  return q;
}

namespace {

// Enumerate all k with prod_j max(|k_j|, 1) <= budget. Integer floor
// division is exact here: m1*m2 <= n iff m2 <= floor(n/m1) for integers.
void hyperbolic_rec(int dim, int axis, std::vector<std::int64_t>& k,
                    std::int64_t budget,
                    std::vector<std::vector<std::int64_t>>& out) {
  if (axis == dim) {
    out.push_back(k);
    return;
  }
  for (std::int64_t v = -budget; v <= budget; ++v) {
    k[axis] = v;
    std::int64_t used = std::max<std::int64_t>(std::abs(v), 1);
    hyperbolic_rec(dim, axis + 1, k, budget / used, out);
  }
}

}  // namespace

FrequencySet build_hyperbolic(std::int64_t n, int dim) {
  if (dim < 1) throw std::invalid_argument("build_hyperbolic: dim < 1");
  if (n < 1) throw std::invalid_argument("build_hyperbolic: n < 1");

  FrequencySet q;
  q.dim = dim;
  q.kind = FrequencySet::Kind::hyperbolic;
  q.params = {n, dim};

  std::vector<std::int64_t> k(dim);
  hyperbolic_rec(dim, 0, k, n, q.freqs);
  sort_unique(q.freqs);
  return q;
}

FrequencySet build_dyadic_block(const std::vector<std::int64_t>& s) {
  if (s.empty()) throw std::invalid_argument("build_dyadic_block: dimension 0");
  std::vector<std::int64_t> n(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] < 0 || s[j] > 30)
      throw std::invalid_argument("build_dyadic_block: exponent out of range");
    n[j] = (std::int64_t{1} << s[j]) - 1;
  }
  FrequencySet q = build_box(n);
  q.kind = FrequencySet::Kind::dyadic_block;
  q.params = s;
  return q;
}

FrequencySet build_explicit(int dim,
                            std::vector<std::vector<std::int64_t>> freqs) {
  if (dim < 1) throw std::invalid_argument("build_explicit: dim < 1");
  for (const auto& k : freqs)
    if (static_cast<int>(k.size()) != dim)
      throw std::invalid_argument("build_explicit: frequency of wrong dim");
  FrequencySet q;
  q.dim = dim;
  q.kind = FrequencySet::Kind::explicit_set;
  q.freqs = std::move(freqs);
  sort_unique(q.freqs);
  return q;
}

FrequencySet symmetrize(const FrequencySet& q) {
  auto freqs = q.freqs;
  for (const auto& k : q.freqs) {
    std::vector<std::int64_t> neg(k.size());
    for (std::size_t j = 0; j < k.size(); ++j) neg[j] = -k[j];
    freqs.push_back(std::move(neg));
  }
  FrequencySet out = build_explicit(q.dim, std::move(freqs));
  return out;
}

}  // namespace normgrid
