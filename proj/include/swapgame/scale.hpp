#pragma once

#include <vector>

#include "swapgame/model.hpp"

namespace swapgame {

/**
 * Coefficients of the r-scale function of the spectrally negative jump
 * diffusion with Exp(eta) jumps.  With phi_r the positive root and
 * -xi[i] the negative roots of phi(s) = r,
 *
 *   W(x) = sum_i c[i] (e^{phi_r x} - e^{-xi[i] x}),  x >= 0,  W(x < 0) = 0,
 *
 * where the weights c[i] are the partial-fraction residues of
 * 1 / (phi(s) - r).  Two exponential terms when lambda > 0, one when
 * lambda == 0 (pure Brownian).
 */
struct ScaleCoefficients {
  ModelParams model;
  double phi_r = 0.0;                ///< positive root of phi(s) = r
  std::vector<double> xi;            ///< negative root magnitudes, ascending
  std::vector<double> c;             ///< exponential weights, each > 0
  std::vector<double> d;             ///< c[i] / (xi[i] - eta); zeros if lambda == 0
  double c_phi = 0.0;                ///< sum of c[i] == 1 / phi'(phi_r)
  double phi_prime_at_phi_r = 0.0;   ///< phi'(phi_r) > 0
};

/// Builds the coefficient set.  Requires nu > 0: with no diffusion part the
/// scale function has a different structure which this engine does not cover.
/// The sum rule |sum c[i] - 1/phi'(phi_r)| <= 1e-12 is enforced.
ScaleCoefficients build_coefficients(const ModelParams& m);

/// W(x); zero for x < 0, and W(0) == 0 exactly since nu > 0.
double W(const ScaleCoefficients& sc, double x);

/// Right derivative for x >= 0; W'(0+) == 2 / nu^2.
double W_prime(const ScaleCoefficients& sc, double x);

double W_double_prime(const ScaleCoefficients& sc, double x);

/// e^{-phi_r x} W(x): increases from 0 to c_phi, flat tail, never overflows.
double W_tilted(const ScaleCoefficients& sc, double x);

/// Z(x) = 1 + r * int_0^x W(y) dy; equals 1 for x <= 0.
double Z(const ScaleCoefficients& sc, double x);

/// zeta(x) = Z(x) - (r / phi_r) W(x) = E^x[e^{-r sigma_0}], the Laplace
/// transform of the first passage of X below 0.  Evaluated in a form free
/// of the growing exponential, so it stays in (0, 1] for all x.
double zeta(const ScaleCoefficients& sc, double x);

/// Right derivative of zeta for x > 0; zero for x <= 0 (zeta is constant 1
/// below the barrier, with a kink at 0).
double zeta_prime(const ScaleCoefficients& sc, double x);

}  // namespace swapgame
