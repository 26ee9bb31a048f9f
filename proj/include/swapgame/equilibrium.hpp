#pragma once

#include <stdexcept>

#include "swapgame/kernel.hpp"

namespace swapgame {

/// Thrown when an iterative search exceeds its hard cap. Signals degenerate
/// contract terms or a violated model assumption, not a transient condition.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Equilibrium threshold pair and its classification.
///
/// case_id: 1 = 0 < A* < B* < inf, 2 = 0 < A*, B* = inf,
///          3 = A* = 0, B* < inf,  4 = A* = 0, B* = inf.
/// nash is false exactly when A* = 0 and the model has a Brownian part; the
/// seller's limiting strategy is then only epsilon-optimal.
struct EquilibriumSolution {
  double a_star = 0.0;
  UpperLevel b_star = UpperLevel::unbounded();
  int case_id = 0;
  bool nash = true;
  /// Continuous-fit residual: Psi_hat(A*, B*). Zero up to tolerance in cases
  /// 1 and 2; merely informational (and typically negative) in case 3.
  double fit_psi_hat = 0.0;
  /// Smooth-fit residual: d/dB Psi_hat(A*, B*) for finite B*, 0 otherwise.
  double fit_dpsi_hat_db = 0.0;
};

/// Computes the seller/buyer exercise thresholds (A*, B*) for the canonical
/// step-down game by bisection on the lower level, using the maps
///   b_lower(A) = inf{B > A : Psi_hat(A, B) >= 0},
///   b_upper(A) = inf{B > A : psi_hat(A, B) <= 0},
///   b_mid(A)   = inf{B > A : d/dB Psi_hat(A, B) <= 0}.
/// Requires nu > 0 (the scale coefficients are two-root based).
class ThresholdSolver {
 public:
  ThresholdSolver(ScaleCoefficients sc, ContractTerms terms);

  /// Unique root of psi_hat(A, inf) = 0, clipped at zero.
  /// Closed form: max(0, (1/eta) ln[lambda ag Phi / ((Phi + eta) pg)]).
  double a_lower() const;
  /// Unique root of psi_hat(A, A+) = 0, clipped at zero.
  /// Closed form: max(0, (1/eta) ln[lambda ag / pg]).  Always >= a_lower().
  double a_upper() const;

  UpperLevel b_lower(double a) const;
  UpperLevel b_upper(double a) const;
  UpperLevel b_mid(double a) const;

  /// Runs the bisection algorithm on [a_lower, a_upper]; eps bounds the
  /// terminal gap |b_upper(A) - b_lower(A)|. Throws NonConvergence after
  /// 200 bisection steps without meeting eps.
  EquilibriumSolution solve(double eps = 1e-8) const;

  const GameKernel& kernel() const { return kernel_; }

 private:
  // b_lower when b_upper(a) is already known.
  UpperLevel b_lower_given(double a, const UpperLevel& bu) const;

  GameKernel kernel_;
};

/// Convenience wrapper: builds scale coefficients and solves.
EquilibriumSolution solve_thresholds(const ModelParams& m,
                                     const ContractTerms& terms,
                                     double eps = 1e-8);

}  // namespace swapgame
