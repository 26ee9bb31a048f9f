#pragma once

#include <cmath>
#include <limits>

#include "swapgame/scale.hpp"

namespace swapgame {

/**
 * Terms of the exercise game on a default swap.  Before exercise the buyer
 * pays premium p for protection alpha; exercising switches the contract to
 * (p_hat, alpha_hat), the exerciser paying a lump-sum fee (gamma_b for the
 * buyer, gamma_s for the seller).  Only the differences enter the game.
 */
struct ContractTerms {
  double p = 0.05;
  double alpha = 1.0;
  double p_hat = 0.025;
  double alpha_hat = 0.5;
  double gamma_b = 0.10;
  double gamma_s = 0.10;

  double p_check() const { return p - p_hat; }
  double alpha_check() const { return alpha - alpha_hat; }

  /// Canonical (step-down) game: premium and protection both decrease on
  /// exercise, and the seller's fee stays below the protection reduction:
  ///   p_check > 0, alpha_check > gamma_s >= 0, gamma_b >= 0,
  ///   gamma_b + gamma_s > 0.
  /// Throws std::invalid_argument otherwise.
  void validate_canonical() const;
};

/// Upper exercise threshold; the unbounded state means "never exercise by
/// up-crossing".  Kernel formulas dispatch on it explicitly instead of
/// saturating a large finite level.
class UpperLevel {
 public:
  explicit UpperLevel(double b) : value_(b) {}
  static UpperLevel unbounded() {
    return UpperLevel(std::numeric_limits<double>::infinity());
  }
  bool is_unbounded() const { return std::isinf(value_); }
  /// Finite value; throws std::logic_error when unbounded.
  double value() const;
  /// +infinity when unbounded; safe for ordering and printing.
  double raw() const { return value_; }

 private:
  double value_;
};

/// Expected discounted jump mass below a, rho(a) = int_a^inf Pi(du)
/// (1 - e^{-phi_r (u - a)}) = lambda e^{-eta a} phi_r / (phi_r + eta).
double rho(const ScaleCoefficients& sc, double a);

/// kappa(x; a) = (1/r) int_a^inf Pi(du) [Z(x - a) - Z(x - u)] for x > a >= 0
/// (throws std::domain_error otherwise), with Pi(du) = lambda eta e^{-eta u} du.
/// Closed form for exponential jumps:
///   lambda e^{-eta a} sum_i c_i [ (e^{phi_r y} - e^{-eta y}) / (eta + phi_r)
///                               + (e^{-xi_i y} - e^{-eta y}) / (xi_i - eta) ],
/// y = x - a, where the second fraction is d_i (e^{-xi_i y} - e^{-eta y}).
double kappa(const ScaleCoefficients& sc, double x, double a);

/// Discounted two-barrier exit transforms from x in (a, b):
///   up           = E^x[e^{-r T} ; exit by creeping up to b]
///   down         = E^x[e^{-r T} ; exit at or below a first]
///   jump_default = E^x[e^{-r T} ; exit directly below 0 by a jump]
/// where T is the first exit from (a, b).  All evaluated in the tilted
/// basis, so large b - a costs no precision.
struct ExitIdentities {
  double up;
  double down;
  double jump_default;
};
ExitIdentities exit_identities(const ScaleCoefficients& sc, double x, double a,
                               double b);

/**
 * Boundary functionals of the canonical step-down game.  Psi(a, b) measures
 * the buyer's indifference at the upper threshold, psi = dPsi/db; the
 * hatted versions are normalized by W(b - a) and extend continuously to
 * b = infinity.  Upsilon is the candidate game value on the band (a, b),
 * up to payoff-constant shifts.
 */
class GameKernel {
 public:
  GameKernel(ScaleCoefficients sc, ContractTerms terms);

  const ScaleCoefficients& scale() const { return sc_; }
  const ContractTerms& terms() const { return terms_; }

  // --- payoffs -----------------------------------------------------------
  double payoff_h(double x) const;  ///< stopped by the buyer
  double payoff_g(double x) const;  ///< stopped by the seller
  double payoff_f(double x) const;  ///< stopped by both at once
  double cds_value(double x) const; ///< C(x) = (p/r + alpha) zeta(x) - p/r

  // --- threshold functionals ----------------------------------------------
  double Psi(double a, double b) const;
  double psi(double a, double b) const;
  double Psi_hat(double a, UpperLevel b) const;
  double psi_hat(double a, UpperLevel b) const;
  double psi_hat_at_a(double a) const;          ///< limit of psi_hat as b -> a+
  double dPsi_hat_db(double a, double b) const; ///< psi_hat - (W'/W) Psi_hat

  // --- candidate value ----------------------------------------------------
  double Upsilon(double x, double a, UpperLevel b) const;

 private:
  double varrho(double a, double y) const;  // bounded residual of Psi
  double jump_integral_hat(double a, double y) const;

  ScaleCoefficients sc_;
  ContractTerms terms_;
  // Precomputed combinations.
  double pg_;       // p_check + r gamma_s > 0
  double ag_;       // alpha_check - gamma_s > 0
  double fee_sum_;  // gamma_b + gamma_s > 0
  double h_inf_;    // p_check / r - gamma_b
  double g_inf_;    // p_check / r + gamma_s
  double pa_;       // p_check / r + alpha_check
};

}  // namespace swapgame
