#include "swapgame/model.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace swapgame {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// P(s) = (phi(s) - q) (eta + s).  Same roots as phi(s) = q but polynomial,
// which keeps Newton steps well behaved on both sides of the pole at -eta.
struct Cubic {
  double a3, a2, a1, a0;

  double operator()(double s) const { return ((a3 * s + a2) * s + a1) * s + a0; }
  double deriv(double s) const { return (3.0 * a3 * s + 2.0 * a2) * s + a1; }
};

Cubic phi_cubic(const ModelParams& m, double q) {
  return Cubic{0.5 * m.nu * m.nu,
               m.mu + 0.5 * m.nu * m.nu * m.eta,
               m.mu * m.eta - q - m.lambda,
               -q * m.eta};
}

// Trigonometric solution for a cubic with three real roots, ascending order.
std::array<double, 3> real_cubic_roots(const Cubic& c) {
  const double b = c.a2 / c.a3;
  const double p = c.a1 / c.a3 - b * b / 3.0;
  const double q0 = 2.0 * b * b * b / 27.0 - b * (c.a1 / c.a3) / 3.0 + c.a0 / c.a3;
  const double shift = -b / 3.0;
  if (p >= 0.0) {
    // Degenerate for our parameter family; only reachable with p == 0 and
    // a triple root, which the interlacing structure rules out.
    throw std::runtime_error("cubic: expected three distinct real roots");
  }
  const double mcoef = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * q0 / (p * mcoef);
  arg = std::clamp(arg, -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  std::array<double, 3> roots;
  for (int k = 0; k < 3; ++k) {
    roots[k] = shift + mcoef * std::cos(theta - 2.0 * kPi * k / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double newton_polish(const Cubic& c, double s) {
  for (int it = 0; it < 50; ++it) {
    const double fx = c(s);
    const double dfx = c.deriv(s);
    if (fx == 0.0 || dfx == 0.0) break;
    const double step = fx / dfx;
    s -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s))) break;
  }
  return s;
}

// Accept a polished root only if the residual of phi(s) = q is at machine
// scale and a sign change brackets it within width 1e-10.  For a root close
// to the pole at -eta (tiny lambda), phi itself cannot be evaluated to
// 1e-12: the residual gate then falls back to the polynomial P, whose
// evaluation noise floor is a few ulps of its largest monomial.
void certify_root(const ModelParams& m, double q, double s, const Cubic& c) {
  const double resid = std::abs(laplace_exponent(m, s) - q);
  const double poly_scale = std::abs(c.a3 * s * s * s) + std::abs(c.a2 * s * s) +
                            std::abs(c.a1 * s) + std::abs(c.a0);
  const bool poly_converged =
      std::abs(c(s)) <= 32.0 * std::numeric_limits<double>::epsilon() * poly_scale;
  if (resid > 1e-12 * std::max(1.0, std::abs(q)) && !poly_converged) {
    throw std::runtime_error("phi root rejected: residual " + std::to_string(resid));
  }
  const double h = 0.5e-10 * std::max(1.0, std::abs(s));
  const double flo = c(s - h);
  const double fhi = c(s + h);
  if (flo * fhi > 0.0 && std::abs(flo) > 1e-13 * std::max(1.0, std::abs(q)) &&
      std::abs(fhi) > 1e-13 * std::max(1.0, std::abs(q))) {
    throw std::runtime_error("phi root rejected: no bracket at width 1e-10");
  }
}

// Positive root of a x^2 + b x + c with a > 0, c < 0 (one sign change).
// The branch choice avoids cancellation between -b and the discriminant.
double positive_quadratic_root(double a, double b, double c) {
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  if (b >= 0.0) return (2.0 * c) / (-b - disc);
  return (-b + disc) / (2.0 * a);
}

}  // namespace

void ModelParams::validate() const {
  if (!(std::isfinite(r) && std::isfinite(mu) && std::isfinite(nu) &&
        std::isfinite(lambda) && std::isfinite(eta))) {
    throw std::invalid_argument("model: parameters must be finite");
  }
  if (r <= 0.0) throw std::invalid_argument("model: r must be > 0");
  if (eta <= 0.0) throw std::invalid_argument("model: eta must be > 0");
  if (nu < 0.0) throw std::invalid_argument("model: nu must be >= 0");
  if (lambda < 0.0) throw std::invalid_argument("model: lambda must be >= 0");
  if (nu == 0.0 && mu <= 0.0) {
    throw std::invalid_argument("model: nu == 0 requires mu > 0");
  }
}

double laplace_exponent(const ModelParams& m, double s) {
  if (s == -m.eta) throw std::domain_error("phi: s == -eta is a pole");
  return m.mu * s + 0.5 * m.nu * m.nu * s * s - m.lambda * s / (m.eta + s);
}

double laplace_exponent_prime(const ModelParams& m, double s) {
  if (s == -m.eta) throw std::domain_error("phi': s == -eta is a pole");
  const double d = m.eta + s;
  return m.mu + m.nu * m.nu * s - m.lambda * m.eta / (d * d);
}

double calibrate_drift(double r, double nu, double lambda, double eta) {
  if (!(r > 0.0) || !(eta > 0.0) || nu < 0.0 || lambda < 0.0) {
    throw std::invalid_argument("calibrate_drift: invalid parameters");
  }
  return r - 0.5 * nu * nu + lambda / (eta + 1.0);
}

double phi_inverse(const ModelParams& m, double q) {
  m.validate();
  if (!(q > 0.0)) throw std::invalid_argument("phi_inverse: q must be > 0");

  const Cubic c = phi_cubic(m, q);
  double s;
  if (m.nu > 0.0 && m.lambda > 0.0) {
    s = real_cubic_roots(c)[2];
  } else if (m.nu > 0.0) {
    // Brownian with drift: 0.5 nu^2 s^2 + mu s - q = 0.
    s = positive_quadratic_root(0.5 * m.nu * m.nu, m.mu, -q);
  } else if (m.lambda > 0.0) {
    // Pure jump with drift: mu s^2 + (mu eta - q - lambda) s - q eta = 0.
    s = positive_quadratic_root(m.mu, m.mu * m.eta - q - m.lambda, -q * m.eta);
  } else {
    s = q / m.mu;
  }
  s = newton_polish(c, s);
  certify_root(m, q, s, c);
  if (!(s > 0.0)) throw std::runtime_error("phi_inverse: root is not positive");
  return s;
}

NegativeRoots negative_roots(const ModelParams& m, double q) {
  m.validate();
  if (!(q > 0.0)) throw std::invalid_argument("negative_roots: q must be > 0");
  if (m.nu <= 0.0) {
    throw std::invalid_argument("negative_roots: nu == 0 has a single negative root");
  }
  if (m.lambda <= 0.0) {
    throw std::invalid_argument("negative_roots: lambda == 0 has a single negative root");
  }
  const Cubic c = phi_cubic(m, q);
  const std::array<double, 3> roots = real_cubic_roots(c);
  NegativeRoots out;
  out.xi2 = -newton_polish(c, roots[0]);
  out.xi1 = -newton_polish(c, roots[1]);
  certify_root(m, q, -out.xi1, c);
  certify_root(m, q, -out.xi2, c);
  if (!(0.0 < out.xi1 && out.xi1 < m.eta && m.eta < out.xi2)) {
    throw std::runtime_error("negative_roots: interlacing 0 < xi1 < eta < xi2 failed");
  }
  return out;
}

}  // namespace swapgame
