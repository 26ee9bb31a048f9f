#pragma once

#include <stdexcept>

namespace swapgame {

/**
 * Parameters of the spectrally negative jump diffusion
 *
 *   X_t = X_0 + mu t + nu B_t - sum_{n <= N_t} Z_n,
 *
 * where B is a standard Brownian motion, N a Poisson process with rate
 * lambda, and the Z_n are i.i.d. Exp(eta) jump sizes (mean 1/eta).
 */
struct ModelParams {
  double r = 0.03;      ///< discount rate, > 0
  double mu = 0.0;      ///< drift
  double nu = 0.2;      ///< diffusion coefficient, >= 0
  double lambda = 1.0;  ///< jump arrival intensity, >= 0
  double eta = 2.0;     ///< jump size rate, > 0

  /// Throws std::invalid_argument on out-of-domain parameters.
  /// Pure-jump models (nu == 0) are accepted only with mu > 0.
  void validate() const;
};

/// Laplace exponent phi(s) = mu s + nu^2 s^2 / 2 - lambda s / (eta + s),
/// defined for s > -eta.  phi(0) = 0 and phi is convex on its domain.
double laplace_exponent(const ModelParams& m, double s);

/// First derivative phi'(s) = mu + nu^2 s - lambda eta / (eta + s)^2.
double laplace_exponent_prime(const ModelParams& m, double s);

/// Drift mu solving phi(1) = r, so that e^{-r t + X_t} is a martingale:
/// mu = r - nu^2 / 2 + lambda / (eta + 1).
double calibrate_drift(double r, double nu, double lambda, double eta);

/// Largest root of phi(s) = q for q > 0 (the right inverse of phi).
/// Supports all parameter corners, including nu == 0 and lambda == 0.
double phi_inverse(const ModelParams& m, double q);

/// Magnitudes of the two negative roots of phi(s) = q, q > 0.
/// They interlace the jump rate: 0 < xi1 < eta < xi2.
struct NegativeRoots {
  double xi1;
  double xi2;
};

/// Requires nu > 0 and lambda > 0 (otherwise fewer than two negative
/// roots exist) and q > 0.  Throws std::invalid_argument otherwise.
NegativeRoots negative_roots(const ModelParams& m, double q);

}  // namespace swapgame
