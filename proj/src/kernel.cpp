#include "swapgame/kernel.hpp"

#include <stdexcept>

namespace swapgame {

namespace {

// Bounded remainder of Z after removing the growing exponential:
//   Z(y) = (r / phi_r) c_phi e^{phi_r y} + Z_res(y),  y >= 0.
double Z_residual(const ScaleCoefficients& sc, double y) {
  double acc = 1.0 - sc.model.r / sc.phi_r * sc.c_phi;
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.model.r * sc.c[i] * (std::exp(-sc.xi[i] * y) - 1.0) / sc.xi[i];
  }
  return acc;
}

// Bounded remainder of kappa:
//   kappa(x; a) = lambda e^{-eta a} c_phi e^{phi_r y} / (eta + phi_r)
//               + kappa_res(y; a),  y = x - a >= 0.
double kappa_residual(const ScaleCoefficients& sc, double y, double a) {
  const ModelParams& m = sc.model;
  if (m.lambda == 0.0) return 0.0;
  const double ey = std::exp(-m.eta * y);
  double acc = -sc.c_phi * ey / (m.eta + sc.phi_r);
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.d[i] * (std::exp(-sc.xi[i] * y) - ey);
  }
  return m.lambda * std::exp(-m.eta * a) * acc;
}

// W'(y) / W(y) without forming the growing exponentials.
double w_logderiv(const ScaleCoefficients& sc, double y) {
  double num = 0.0;
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    num += sc.c[i] * (sc.phi_r + sc.xi[i] * std::exp(-(sc.phi_r + sc.xi[i]) * y));
  }
  return num / W_tilted(sc, y);
}

// e^{phi_r (x-a)} (1 - W(x-a) / W(b-a)), the bounded "deficit" factor shared
// by the down and jump_default exit identities; xa = x - a, ba = b - a.
double exit_deficit(const ScaleCoefficients& sc, double xa, double ba) {
  double acc = 0.0;
  const double eup = std::exp(-sc.phi_r * (ba - xa));
  for (std::size_t i = 0; i < sc.c.size(); ++i) {
    acc += sc.c[i] *
           (std::exp(-sc.xi[i] * xa) - eup * std::exp(-sc.xi[i] * ba));
  }
  return acc / W_tilted(sc, ba);
}

}  // namespace

void ContractTerms::validate_canonical() const {
  if (!(std::isfinite(p) && std::isfinite(alpha) && std::isfinite(p_hat) &&
        std::isfinite(alpha_hat) && std::isfinite(gamma_b) &&
        std::isfinite(gamma_s))) {
    throw std::invalid_argument("contract: terms must be finite");
  }
  if (!(p_check() > 0.0)) {
    throw std::invalid_argument("contract: requires p - p_hat > 0");
  }
  if (gamma_s < 0.0 || gamma_b < 0.0) {
    throw std::invalid_argument("contract: fees must be >= 0");
  }
  if (!(gamma_b + gamma_s > 0.0)) {
    throw std::invalid_argument("contract: at least one fee must be > 0");
  }
  if (!(alpha_check() > gamma_s)) {
    throw std::invalid_argument(
        "contract: seller fee gamma_s must stay below the protection "
        "reduction alpha - alpha_hat");
  }
}

double UpperLevel::value() const {
  if (is_unbounded()) {
    throw std::logic_error("UpperLevel: no finite value, level is unbounded");
  }
  return value_;
}

double rho(const ScaleCoefficients& sc, double a) {
  if (a < 0.0) throw std::domain_error("rho: requires a >= 0");
  const ModelParams& m = sc.model;
  if (m.lambda == 0.0) return 0.0;
  return m.lambda * std::exp(-m.eta * a) * sc.phi_r / (sc.phi_r + m.eta);
}

double kappa(const ScaleCoefficients& sc, double x, double a) {
  if (!(x > a) || a < 0.0) {
    throw std::domain_error("kappa: requires x > a >= 0");
  }
  const ModelParams& m = sc.model;
  if (m.lambda == 0.0) return 0.0;
  const double y = x - a;
  return m.lambda * std::exp(-m.eta * a) * sc.c_phi * std::exp(sc.phi_r * y) /
             (m.eta + sc.phi_r) +
         kappa_residual(sc, y, a);
}

ExitIdentities exit_identities(const ScaleCoefficients& sc, double x, double a,
                               double b) {
  if (!(0.0 <= a && a < x && x < b) || !std::isfinite(b)) {
    throw std::domain_error("exit_identities: requires 0 <= a < x < b < inf");
  }
  const ModelParams& m = sc.model;
  const double xa = x - a;
  const double ba = b - a;
  ExitIdentities out;
  out.up = std::exp(-sc.phi_r * (ba - xa)) * W_tilted(sc, xa) / W_tilted(sc, ba);
  const double deficit = exit_deficit(sc, xa, ba);
  out.down = m.r / sc.phi_r * sc.c_phi * deficit + Z_residual(sc, xa) -
             Z_residual(sc, ba) * out.up;
  if (m.lambda == 0.0) {
    out.jump_default = 0.0;
  } else {
    out.jump_default = -m.lambda * std::exp(-m.eta * a) * sc.c_phi /
                           (m.eta + sc.phi_r) * deficit +
                       out.up * kappa_residual(sc, ba, a) -
                       kappa_residual(sc, xa, a);
  }
  return out;
}

GameKernel::GameKernel(ScaleCoefficients sc, ContractTerms terms)
    : sc_(std::move(sc)), terms_(terms) {
  terms_.validate_canonical();
  const double r = sc_.model.r;
  pg_ = terms_.p_check() + r * terms_.gamma_s;
  ag_ = terms_.alpha_check() - terms_.gamma_s;
  fee_sum_ = terms_.gamma_b + terms_.gamma_s;
  h_inf_ = terms_.p_check() / r - terms_.gamma_b;
  g_inf_ = terms_.p_check() / r + terms_.gamma_s;
  pa_ = terms_.p_check() / r + terms_.alpha_check();
}

double GameKernel::payoff_h(double x) const {
  if (x <= 0.0) return 0.0;
  return h_inf_ - pa_ * zeta(sc_, x);
}

double GameKernel::payoff_g(double x) const {
  if (x <= 0.0) return 0.0;
  return g_inf_ - pa_ * zeta(sc_, x);
}

double GameKernel::payoff_f(double x) const {
  if (x <= 0.0) return 0.0;
  return h_inf_ + terms_.gamma_s - pa_ * zeta(sc_, x);
}

double GameKernel::cds_value(double x) const {
  const double r = sc_.model.r;
  return (terms_.p / r + terms_.alpha) * zeta(sc_, x) - terms_.p / r;
}

double GameKernel::Psi(double a, double b) const {
  if (!(0.0 <= a && a < b) || !std::isfinite(b)) {
    throw std::domain_error("Psi: requires 0 <= a < b < inf");
  }
  const double kab = sc_.model.lambda > 0.0 ? kappa(sc_, b, a) : 0.0;
  return h_inf_ - g_inf_ * Z(sc_, b - a) + ag_ * kab;
}

double GameKernel::psi(double a, double b) const {
  return psi_hat(a, UpperLevel(b)) * W(sc_, b - a);
}

// Bounded residual of Psi in the tilted split
//   Psi(a, b) = c_phi Psi_hat(a, inf) e^{phi_r y} + varrho(a, y),  y = b - a.
double GameKernel::varrho(double a, double y) const {
  const ModelParams& m = sc_.model;
  double s1 = 0.0;
  for (std::size_t i = 0; i < sc_.c.size(); ++i) {
    s1 += sc_.c[i] *
          (-1.0 / sc_.phi_r + (std::exp(-sc_.xi[i] * y) - 1.0) / sc_.xi[i]);
  }
  double acc = -fee_sum_ - pg_ * s1;
  if (m.lambda > 0.0) {
    const double ea = std::exp(-m.eta * a);
    const double eb = ea * std::exp(-m.eta * y);
    double jump = -sc_.c_phi * eb / (m.eta + sc_.phi_r);
    for (std::size_t i = 0; i < sc_.c.size(); ++i) {
      jump += sc_.d[i] * (ea * std::exp(-sc_.xi[i] * y) - eb);
    }
    acc += ag_ * m.lambda * jump;
  }
  return acc;
}

double GameKernel::Psi_hat(double a, UpperLevel b) const {
  if (a < 0.0) throw std::domain_error("Psi_hat: requires a >= 0");
  const double inf_val = (-pg_ + ag_ * rho(sc_, a)) / sc_.phi_r;
  if (b.is_unbounded()) return inf_val;
  const double y = b.value() - a;
  if (!(y > 0.0)) throw std::domain_error("Psi_hat: requires b > a");
  return (sc_.c_phi * inf_val + std::exp(-sc_.phi_r * y) * varrho(a, y)) /
         W_tilted(sc_, y);
}

// Normalized jump integral int_a^inf Pi(du) (1 - W(b-u)/W(b-a)) in a form
// with every exponent nonpositive.
double GameKernel::jump_integral_hat(double a, double y) const {
  const ModelParams& m = sc_.model;
  if (m.lambda == 0.0) return 0.0;
  const double ea = std::exp(-m.eta * a);
  const double eb = ea * std::exp(-m.eta * y);
  const double wt = W_tilted(sc_, y);
  double tail = 0.0;
  for (std::size_t i = 0; i < sc_.c.size(); ++i) {
    tail += m.eta * (sc_.c[i] / (m.eta + sc_.phi_r) + sc_.d[i]) * eb -
            m.eta * sc_.d[i] * ea * std::exp(-sc_.xi[i] * y);
  }
  return m.lambda * (ea - sc_.c_phi / wt * m.eta / (m.eta + sc_.phi_r) * ea +
                     std::exp(-sc_.phi_r * y) / wt * tail);
}

double GameKernel::psi_hat(double a, UpperLevel b) const {
  if (a < 0.0) throw std::domain_error("psi_hat: requires a >= 0");
  if (b.is_unbounded()) return -pg_ + ag_ * rho(sc_, a);
  const double y = b.value() - a;
  if (!(y > 0.0)) throw std::domain_error("psi_hat: requires b > a");
  return -pg_ + ag_ * jump_integral_hat(a, y);
}

double GameKernel::psi_hat_at_a(double a) const {
  if (a < 0.0) throw std::domain_error("psi_hat_at_a: requires a >= 0");
  return -pg_ + ag_ * sc_.model.lambda * std::exp(-sc_.model.eta * a);
}

double GameKernel::dPsi_hat_db(double a, double b) const {
  return psi_hat(a, UpperLevel(b)) -
         w_logderiv(sc_, b - a) * Psi_hat(a, UpperLevel(b));
}

double GameKernel::Upsilon(double x, double a, UpperLevel b) const {
  if (!(0.0 <= a && a < x)) throw std::domain_error("Upsilon: requires a < x");
  if (!b.is_unbounded() && !(x <= b.value())) {
    throw std::domain_error("Upsilon: requires x <= b");
  }
  const double y = x - a;
  const double psi_hat_inf = (-pg_ + ag_ * rho(sc_, a)) / sc_.phi_r;

  // Bounded part: -Psi_hat(a,b) sum_i c_i e^{-xi_i y}
  //               + (p_check/r + gamma_s) Z_res(y) - ag kappa_res(y; a).
  const double phat = Psi_hat(a, b);
  double rem = g_inf_ * Z_residual(sc_, y) - ag_ * kappa_residual(sc_, y, a);
  for (std::size_t i = 0; i < sc_.c.size(); ++i) {
    rem -= phat * sc_.c[i] * std::exp(-sc_.xi[i] * y);
  }
  if (b.is_unbounded()) return rem;

  // Growing part c_phi e^{phi_r y} (Psi_hat(a,b) - Psi_hat(a,inf)), regrouped
  // so that every exponent is nonpositive.
  const double ba = b.value() - a;
  const double eup = std::exp(-sc_.phi_r * (ba - y));
  double top = eup * varrho(a, ba);
  for (std::size_t i = 0; i < sc_.c.size(); ++i) {
    top += sc_.c[i] * eup * std::exp(-sc_.xi[i] * ba) * psi_hat_inf;
  }
  return sc_.c_phi * top / W_tilted(sc_, ba) + rem;
}

}  // namespace swapgame
