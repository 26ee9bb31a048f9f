#pragma once

#include <vector>

#include "swapgame/equilibrium.hpp"

namespace swapgame {

/// Position of a state relative to the equilibrium thresholds, labeled by the
/// party whose exercise governs that region under the original contract.
enum class CurveRegion {
  kDefault,        ///< x <= 0, reference entity in default
  kSellerStepped,  ///< seller exercises immediately here
  kBuyerStepped,   ///< buyer exercises immediately here
  kContinuation,   ///< both parties wait
};

const char* to_string(CurveRegion region);

/// Total contract value sampled over a state grid.
struct ValueCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<CurveRegion> regions;
  /// Thresholds of the canonical game the contract reduces to (the lower one
  /// belongs to the buyer, not the seller, for step-up contracts).
  double a_star = 0.0;
  UpperLevel b_star = UpperLevel::unbounded();
  double premium = 0.0;
};

/**
 * Equilibrium valuation of a step-down or step-up contract.
 *
 * Step-down terms (p_check > 0, alpha_check > 0) are solved directly.
 * Step-up terms (p_check < 0, alpha_check < 0) are mapped to the equivalent
 * step-down game by negating the adjustments and swapping the two fees; the
 * saddle of that game, with the party roles exchanged, is the saddle of the
 * original, and V = C - v instead of C + v.  Mixed signs and zero
 * adjustments are rejected: such contracts are exercised trivially.
 */
class Valuation {
 public:
  /// eps is the gap target forwarded to the threshold solver.
  Valuation(ScaleCoefficients sc, ContractTerms terms, double eps = 1e-8);

  bool step_up() const { return step_up_; }
  const ContractTerms& terms() const { return original_; }
  /// Kernel and saddle of the canonical (step-down) game.
  const GameKernel& kernel() const { return kernel_; }
  const EquilibriumSolution& solution() const { return sol_; }

  /// Exercise levels in original-contract roles.  For step-down contracts
  /// the seller holds the lower threshold; for step-up the roles swap, so
  /// the seller's level may be unbounded while the buyer's is finite.
  UpperLevel seller_level() const;
  UpperLevel buyer_level() const;

  /// Value of the canonical stopping game at x (zero at and below default).
  double value_v(double x) const;
  /// Running CDS value C(x) of the original contract.
  double contract_value(double x) const;
  /// Total contract value V(x) = C(x) + v(x), or C(x) - v(x) for step-up.
  double value_V(double x) const;

  CurveRegion region(double x) const;
  ValueCurve curve(const std::vector<double>& grid) const;

 private:
  ContractTerms original_;
  bool step_up_;
  GameKernel kernel_;
  EquilibriumSolution sol_;
  double pa_;  // p_check / r + alpha_check of the canonical game
};

/// Canonical-game value function: the seller-stop payoff g below A*, the
/// buyer-stop payoff h above B*, and the two-sided first-passage transform
/// in between.  Zero at and below the default barrier.
double value_v(const GameKernel& kernel, const EquilibriumSolution& sol,
               double x);

/// One-shot total value; builds a Valuation (solving the thresholds) and
/// evaluates it at x.
double value_V(const ScaleCoefficients& sc, const ContractTerms& terms,
               double x, double eps = 1e-8);

/// One-sided fit residuals of the canonical game value at the thresholds.
/// Derivative residuals use a one-sided 4-point finite-difference probe of
/// value_v against the analytic payoff slope, deliberately independent of
/// the closed-form interior derivative.
struct SmoothnessReport {
  bool has_lower = false;          ///< A* > 0, so a seller boundary exists
  bool has_upper = false;          ///< B* finite, so a buyer boundary exists
  bool smooth_lower_applies = false;  ///< nu > 0: fit at A* should be smooth
  double cont_lower = 0.0;   ///< |v(A*+) - g(A*+)|
  double cont_upper = 0.0;   ///< |v(B*-) - h(B*-)|
  double smooth_lower = 0.0; ///< |v'(A*+) - g'(A*)|
  double smooth_upper = 0.0; ///< |v'(B*-) - h'(B*)|
};

SmoothnessReport smoothness_report(const Valuation& valuation);

/**
 * Premium p* making the contract worthless at x: V(x; p*) = 0 with
 * p_hat = q p and alpha_hat = q alpha taken from the template terms.
 * V is decreasing in p, so a bracket [0, p_hi] with p_hi doubled from
 * 10 r (alpha + gamma_b) until V(p_hi) <= 0 isolates the root; plain
 * bisection then drives |V| below 1e-8.  q = 1 collapses to the plain
 * CDS par premium r alpha zeta(x) / (1 - zeta(x)).
 * Throws NonConvergence when no sign change appears within 60 doublings.
 */
double equilibrium_premium(const ScaleCoefficients& sc,
                           const ContractTerms& terms_template, double q,
                           double x, double eps = 1e-8);

}  // namespace swapgame
