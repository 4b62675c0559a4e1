#pragma once

#include <cstdint>
#include <vector>

#include "normgrid/certify.hpp"
#include "normgrid/common.hpp"
#include "normgrid/ortho_system.hpp"
#include "normgrid/point_set.hpp"

namespace normgrid::sampling {

enum class Tail { lower, upper };

/// Matrix concentration tail for a sum of independent PSD rank-one terms
/// with spectral caps R and expectation extremes s:
///   lower: n (e^{-eta} / (1-eta)^{1-eta})^{s/R},  eta in [0, 1)
///   upper: n (e^{+eta} / (1+eta)^{1+eta})^{s/R},  eta >= 0.
double chernoff_bound(int n, double eta, double s_over_r, Tail tail);

struct SamplePlan {
  int n = 0;
  double t = 1.0;        // uniform-boundedness constant of the system
  double eps = 0.0;      // target two-sided accuracy
  double delta = 0.0;    // failure probability budget
  long long m = 0;       // recommended sample count
  double r = 0.0;        // spectral cap n t^2
  double derived_c = 0.0;  // m eps^2 / (t^2 n log(2n/delta))
};

/// Smallest m for which both concentration tails at eta = eps drop below
/// delta/2 (orthonormal case: the expected Gram of m draws is m I).
SamplePlan plan_sample_size(int n, double t, double eps, double delta);

enum class SampleMode {
  iid,   // m independent uniform draws from the domain
  grid   // m independent draws from the discrete uniform measure on the
         // 8x-oversampled reference grid (the full table when tabulated)
};

struct SampleCertified {
  PointSet points;
  DiscretizationCertificate cert;
};

/// Draw m points and certify the equal-weight rule for q = 2 exactly
/// (eigenvalues of the sampled Gram). A bad draw is returned with its
/// certificate (possibly c1 <= 0), never hidden.
SampleCertified sample_and_certify_l2(const OrthoSystem& sys, int m,
                                      std::uint64_t seed,
                                      SampleMode mode = SampleMode::iid,
                                      const Tolerances& tol = {});

struct SubsetResult {
  std::vector<std::size_t> indices;  // rows of the tabulated domain, sorted
  DiscretizationCertificate cert;
  int best_trial = -1;
};

/// Random search over m-subsets of a tabulated domain: `trials` seeded
/// draws, keep the subset maximizing min(c1, 2 - c2) of the exact q = 2
/// certificate (weights 1/m against the uniform discrete measure).
SubsetResult subset_select_discrete(const OrthoSystem& sys, int m, int trials,
                                    std::uint64_t seed,
                                    const Tolerances& tol = {});

/// m iid draws with the empirical q = 1 certificate (probe extremization;
/// c1/c2 are verified one-sided bounds, not the true constants).
SampleCertified sample_and_certify_l1(const OrthoSystem& sys, int m,
                                      std::uint64_t seed, int probe_budget,
                                      int grid_oversample = 16);

struct MonteCarloDomain {
  OrthoSystem system;      // tabulated restriction, re-orthonormalized
  PointSet sample_points;  // the actual draws (torus coordinates)
  int m = 0;
  int rounds = 0;
  double delta = 0.0;             // requested
  double achieved_offdiag = 0.0;  // max |Gram - I| entry of the raw restriction
  double fourth_moment = 0.0;     // max_i discrete mean of u_i^4
  DiscretizationCertificate cert; // eigenvalues of the raw restricted Gram
};

/// Doubling Monte Carlo search for a discrete domain whose uniform measure
/// reproduces all pairwise products within delta/n entrywise, which forces
/// the restricted Gram eigenvalues into [1 - delta, 1 + delta]. The emitted
/// tabulated system is re-orthonormalized (Cholesky of the sampled Gram), so
/// it is exactly orthonormal over the new domain and spans the same
/// functions. Throws NumericalFailure with the best achieved deviation if
/// max_rounds doublings are not enough.
MonteCarloDomain monte_carlo_domain(const OrthoSystem& sys, double delta,
                                    std::uint64_t seed, int max_rounds = 18,
                                    const Tolerances& tol = {});

}  // namespace normgrid::sampling
