#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "normgrid/certify.hpp"
#include "normgrid/common.hpp"
#include "normgrid/frequency_set.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid::universal {

/// Exact dispersion: the largest volume of an open axis-parallel empty box
/// in [0,1]^d. Candidate boundaries come from the point coordinates plus the
/// cube faces (any maximal empty box is supported by them). d = 1 is a gap
/// scan; d = 2 sweeps blocker sets per bottom support (O(n^2 log n)); d >= 3
/// recurses over first-axis extents. Desk-scale: d <= 4, |T| <= 1e4.
double dispersion(const PointSet& t);

struct NetParams {
  int t = 0;
  int r = 0;
  int d = 2;
};

struct NetCheck {
  bool ok = true;
  std::vector<int> shape;                // violating dyadic shape s
  std::vector<std::int64_t> position;    // violating box position
  std::int64_t count = -1;               // points found in that box
};

/// Digital-net property in base 2: every dyadic box of shape s
/// (sum s_j = r - t) at every position contains exactly 2^t points,
/// half-open boxes. Returns the lexicographically first violation.
NetCheck verify_net(const PointSet& t, const NetParams& params);

/// {(i / 2^r, bit-reversal of i / 2^r)}: a (0, r, 2)-net. d must be 2.
PointSet build_hammersley_net(int r, int d = 2);

struct Collection {
  std::string kind;  // "dyadic" | "sparse"
  int n = 0;
  int d = 0;
  int v = 0;  // sparse member size (0 for dyadic)
  std::vector<FrequencySet> members;
};

/// All dyadic blocks R(s) with ||s||_1 = n: binom(n+d-1, d-1) members,
/// shapes in ascending lexicographic order.
Collection build_collection_dyadic(int n, int d);

struct MemberOutcome {
  int member = 0;
  bool ok = true;
  std::string error;
  DiscretizationCertificate cert;
};

struct UniversalReport {
  double q = 2.0;
  int m = 0;
  double worst_c1 = 0.0;   // min over certified members
  double worst_c2 = 0.0;   // max over certified members
  double worst_ratio = 0.0;  // q = inf: max fixed-set ratio
  int argmin_member = -1;
  std::vector<int> failures;  // unbounded / rank-deficient / errored members
  std::vector<MemberOutcome> outcomes;
  std::uint64_t seed = 0;
};

/// Certify every member of the collection on the same node set and reduce:
/// q = 2 exact (real Gram for symmetric members, complex Hermitian Gram
/// otherwise), q = inf certified LP sweep (symmetric members only),
/// q = 1 empirical probes. Per-member errors are captured, not propagated.
UniversalReport certify_universal(const Collection& col, const PointSet& pts,
                                  double q, int probe_budget,
                                  std::uint64_t seed, int oversample = 8,
                                  const Tolerances& tol = {}, int threads = 1);

struct SparseReport {
  int v = 0, n = 0, d = 0;
  double q = 2.0;
  int m = 0;
  bool enumerated = false;  // all members vs seeded sample
  int members_checked = 0;
  double min_c1 = 0.0;
  double max_c2 = 0.0;
  double failure_fraction = 0.0;
  double theory_m = 0.0;  // v^2 n (q=2) or v^2 n^{9/2} (q=1), constant 1
  std::uint64_t seed = 0;
};

/// Universality of one iid draw over the sparse collection S(v, n): all
/// v-subsets of the symmetric box with |k_j| <= 2^{n-1}-1 when there are at
/// most 1e5 of them, otherwise `sample_count` seeded members. q = 2 is the
/// exact complex Gram spectrum; q = 1 is probe-based.
SparseReport universal_random_for_sparse(int v, int n, int d, double q, int m,
                                         std::uint64_t seed, int sample_count,
                                         int probe_budget = 32,
                                         const Tolerances& tol = {});

struct DispersionUniversalReport {
  int r = 0;
  double dispersion_value = 0.0;
  std::vector<double> ratios;  // worst-member ratio for c = 0..3 (inf = fail)
  int smallest_c = -1;         // first c with a finite ratio <= threshold
  double threshold = 0.0;
};

/// Forward direction: given T in [0,1)^2 with |T| = 2^r, sweep c = 0..3 and
/// measure the worst-member sup-norm ratio of 2 pi T for the dyadic
/// collection with n = r - c.
DispersionUniversalReport dispersion_implies_universal_check(
    const PointSet& t, double threshold, const Tolerances& tol = {},
    int threads = 1);

struct InverseDispersionReport {
  int n = 0;
  double dispersion_value = 0.0;
  double fitted_c = 0.0;  // dispersion * 2^n
};

/// Inverse direction: a set that is universal for the dyadic collection at
/// level n must have dispersion <= C(d) 2^{-n}; reports the fitted C.
InverseDispersionReport universal_implies_dispersion_check(const PointSet& t,
                                                           int n);

}  // namespace normgrid::universal
