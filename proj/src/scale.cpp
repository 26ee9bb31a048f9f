#include "swapgame/scale.hpp"

#include <cmath>
#include <string>

namespace swapgame {

ScaleCoefficients build_coefficients(const ModelParams& m) {
  m.validate();
  if (m.nu <= 0.0) {
    throw std::invalid_argument("build_coefficients: requires nu > 0");
  }

  ScaleCoefficients sc;
  sc.model = m;
  sc.phi_r = phi_inverse(m, m.r);
  sc.phi_prime_at_phi_r = laplace_exponent_prime(m, sc.phi_r);
  if (!(sc.phi_prime_at_phi_r > 0.0)) {
    throw std::runtime_error("build_coefficients: phi'(phi_r) must be > 0");
  }
  sc.c_phi = 1.0 / sc.phi_prime_at_phi_r;

  if (m.lambda > 0.0) {
    const NegativeRoots nr = negative_roots(m, m.r);
    sc.xi = {nr.xi1, nr.xi2};
    // Residues of (eta + s) / P(s) at the negative roots, with
    // P(s) = (phi(s) - r)(eta + s).  Writing d = 1 / P'(-xi) first keeps
    // the xi1 -> eta near-cancellation (lambda -> 0) out of c / (xi - eta).
    const double a3 = 0.5 * m.nu * m.nu;
    const double a2 = m.mu + 0.5 * m.nu * m.nu * m.eta;
    const double a1 = m.mu * m.eta - m.r - m.lambda;
    for (double xi : sc.xi) {
      const double s = -xi;
      const double pprime = (3.0 * a3 * s + 2.0 * a2) * s + a1;
      const double d = 1.0 / pprime;
      sc.d.push_back(d);
      sc.c.push_back((xi - m.eta) * d);
    }
  } else {
    // Brownian case: 1 / (phi(s) - r) has two simple poles.
    const double disc = std::sqrt(m.mu * m.mu + 2.0 * m.nu * m.nu * m.r);
    const double theta_minus = (m.mu + disc) / (m.nu * m.nu);
    sc.xi = {theta_minus};
    sc.c = {1.0 / disc};
    sc.d = {0.0};
  }

  double csum = 0.0;
  for (double ci : sc.c) {
    if (!(ci > 0.0)) throw std::runtime_error("build_coefficients: weight c <= 0");
    csum += ci;
  }
  if (std::abs(csum - sc.c_phi) > 1e-12 * std::max(1.0, sc.c_phi)) {
    throw std::runtime_error("build_coefficients: sum(c) != 1/phi'(phi_r), gap " +
                             std::to_string(std::abs(csum - sc.c_phi)));
  }
  return sc;
}

double W(const ScaleCoefficients& sc, double x) {
  if (x < 0.0) return 0.0;
  double acc = 0.0;
  const double ep = std::exp(sc.phi_r * x);
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.c[i] * (ep - std::exp(-sc.xi[i] * x));
  }
  return acc;
}

double W_prime(const ScaleCoefficients& sc, double x) {
  if (x < 0.0) return 0.0;
  double acc = 0.0;
  const double ep = std::exp(sc.phi_r * x);
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.c[i] * (sc.phi_r * ep + sc.xi[i] * std::exp(-sc.xi[i] * x));
  }
  return acc;
}

double W_double_prime(const ScaleCoefficients& sc, double x) {
  if (x < 0.0) return 0.0;
  double acc = 0.0;
  const double ep = std::exp(sc.phi_r * x);
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.c[i] * (sc.phi_r * sc.phi_r * ep -
                      sc.xi[i] * sc.xi[i] * std::exp(-sc.xi[i] * x));
  }
  return acc;
}

double W_tilted(const ScaleCoefficients& sc, double x) {
  if (x < 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.c[i] * (1.0 - std::exp(-(sc.phi_r + sc.xi[i]) * x));
  }
  return acc;
}

double Z(const ScaleCoefficients& sc, double x) {
  if (x <= 0.0) return 1.0;
  double acc = 1.0;
  const double ep = std::exp(sc.phi_r * x);
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.model.r * sc.c[i] *
           ((ep - 1.0) / sc.phi_r + (std::exp(-sc.xi[i] * x) - 1.0) / sc.xi[i]);
  }
  return acc;
}

double zeta(const ScaleCoefficients& sc, double x) {
  if (x <= 0.0) return 1.0;
  // Z - (r/phi_r) W with the e^{phi_r x} terms cancelled algebraically:
  //   zeta(x) = 1 - r sum_i c[i] (1/phi_r + 1/xi[i]) (1 - e^{-xi[i] x}),
  // which decays to 0 because r sum_i c[i](1/phi_r + 1/xi[i]) = 1.
  double acc = 1.0;
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc -= sc.model.r * sc.c[i] * (1.0 / sc.phi_r + 1.0 / sc.xi[i]) *
           (1.0 - std::exp(-sc.xi[i] * x));
  }
  return acc;
}

double zeta_prime(const ScaleCoefficients& sc, double x) {
  if (x <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc -= sc.model.r * sc.c[i] * (1.0 / sc.phi_r + 1.0 / sc.xi[i]) *
           sc.xi[i] * std::exp(-sc.xi[i] * x);
  }
  return acc;
}

}  // namespace swapgame
