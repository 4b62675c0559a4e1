#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace normgrid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

/// Central numeric thresholds. Every routine that needs a cutoff takes one of
/// these (defaulted), so tests can tighten or relax a single knob.
struct Tolerances {
  double feasibility = 1e-8;   ///< linear feasibility / moment residuals
  double symmetry = 1e-10;     ///< relative symmetry check before eigensolves
  double rank = 1e-10;         ///< relative rank / pivot cutoff
  double pivot = 1e-11;        ///< simplex pivot magnitude floor
  double reduced_cost = 1e-9;  ///< simplex optimality threshold
};

/// A numeric routine could not certify its postcondition (iteration cap,
/// ill-conditioning, ...).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A candidate set fails to span the requested space; `step` is the first
/// selection step at which every remaining candidate was degenerate.
class SpanDeficiency : public std::runtime_error {
 public:
  SpanDeficiency(int step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// A constraint system admits no solution within tolerance.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace normgrid
