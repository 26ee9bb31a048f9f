#include "swapgame/valuation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace swapgame {

namespace {

constexpr double kValueTol = 1e-8;  // |V(x; p*)| at the equilibrium premium
constexpr int kPremiumDoublings = 60;
constexpr int kPremiumBisections = 200;

// Step-up terms map to the step-down game with the adjustments negated and
// the fees swapped; the exchanged premium/protection fields keep the checked
// differences exact (no re-derived arithmetic).
ContractTerms canonical_terms(const ContractTerms& t, bool step_up) {
  if (!step_up) return t;
  ContractTerms c = t;
  c.p = t.p_hat;
  c.p_hat = t.p;
  c.alpha = t.alpha_hat;
  c.alpha_hat = t.alpha;
  c.gamma_b = t.gamma_s;
  c.gamma_s = t.gamma_b;
  return c;
}

bool detect_step_up(const ContractTerms& t) {
  const double pc = t.p_check();
  const double ac = t.alpha_check();
  if (pc > 0.0 && ac > 0.0) return false;
  if (pc < 0.0 && ac < 0.0) return true;
  throw std::invalid_argument(
      "contract adjustments must move premium and protection in the same "
      "direction and by a nonzero amount (step-down: p_hat < p and "
      "alpha_hat < alpha; step-up: both raised)");
}

// One-sided 4-point finite difference, O(h^3); step sign picks the side.
template <typename F>
double one_sided_derivative(F f, double x, double h) {
  return (-11.0 * f(x) + 18.0 * f(x + h) - 9.0 * f(x + 2.0 * h) +
          2.0 * f(x + 3.0 * h)) /
         (6.0 * h);
}

}  // namespace

const char* to_string(CurveRegion region) {
  switch (region) {
    case CurveRegion::kDefault: return "default";
    case CurveRegion::kSellerStepped: return "seller_stepped";
    case CurveRegion::kBuyerStepped: return "buyer_stepped";
    case CurveRegion::kContinuation: return "continuation";
  }
  return "unknown";
}

Valuation::Valuation(ScaleCoefficients sc, ContractTerms terms, double eps)
    : original_(terms),
      step_up_(detect_step_up(terms)),
      kernel_(std::move(sc), canonical_terms(terms, step_up_)),
      sol_(ThresholdSolver(kernel_.scale(), kernel_.terms()).solve(eps)) {
  const ContractTerms& c = kernel_.terms();
  pa_ = c.p_check() / kernel_.scale().model.r + c.alpha_check();
}

UpperLevel Valuation::seller_level() const {
  return step_up_ ? sol_.b_star : UpperLevel(sol_.a_star);
}

UpperLevel Valuation::buyer_level() const {
  return step_up_ ? UpperLevel(sol_.a_star) : sol_.b_star;
}

double Valuation::value_v(double x) const {
  return swapgame::value_v(kernel_, sol_, x);
}

double Valuation::contract_value(double x) const {
  if (x <= 0.0) return original_.alpha;
  const ScaleCoefficients& sc = kernel_.scale();
  const double pr = original_.p / sc.model.r;
  return (pr + original_.alpha) * zeta(sc, x) - pr;
}

double Valuation::value_V(double x) const {
  const double v = value_v(x);
  return contract_value(x) + (step_up_ ? -v : v);
}

CurveRegion Valuation::region(double x) const {
  if (x <= 0.0) return CurveRegion::kDefault;
  const CurveRegion low =
      step_up_ ? CurveRegion::kBuyerStepped : CurveRegion::kSellerStepped;
  const CurveRegion high =
      step_up_ ? CurveRegion::kSellerStepped : CurveRegion::kBuyerStepped;
  if (sol_.a_star > 0.0 && x <= sol_.a_star) return low;
  if (!sol_.b_star.is_unbounded() && x >= sol_.b_star.value()) return high;
  return CurveRegion::kContinuation;
}

ValueCurve Valuation::curve(const std::vector<double>& grid) const {
  ValueCurve out;
  out.grid = grid;
  out.values.reserve(grid.size());
  out.regions.reserve(grid.size());
  for (double x : grid) {
    out.values.push_back(value_V(x));
    out.regions.push_back(region(x));
  }
  out.a_star = sol_.a_star;
  out.b_star = sol_.b_star;
  out.premium = original_.p;
  return out;
}

double value_v(const GameKernel& kernel, const EquilibriumSolution& sol,
               double x) {
  if (x <= 0.0) return 0.0;
  if (sol.a_star > 0.0 && x <= sol.a_star) return kernel.payoff_g(x);
  if (!sol.b_star.is_unbounded() && x >= sol.b_star.value()) {
    return kernel.payoff_h(x);
  }
  const ContractTerms& t = kernel.terms();
  const ScaleCoefficients& sc = kernel.scale();
  const double pa = t.p_check() / sc.model.r + t.alpha_check();
  return kernel.Upsilon(x, sol.a_star, sol.b_star) - pa * zeta(sc, x);
}

double value_V(const ScaleCoefficients& sc, const ContractTerms& terms,
               double x, double eps) {
  return Valuation(sc, terms, eps).value_V(x);
}

SmoothnessReport smoothness_report(const Valuation& valuation) {
  const EquilibriumSolution& s = valuation.solution();
  const GameKernel& k = valuation.kernel();
  const ScaleCoefficients& sc = k.scale();
  const ContractTerms& t = k.terms();
  const double pa = t.p_check() / sc.model.r + t.alpha_check();

  SmoothnessReport rep;
  rep.has_lower = s.a_star > 0.0;
  rep.has_upper = !s.b_star.is_unbounded();
  rep.smooth_lower_applies = sc.model.nu > 0.0;

  auto v = [&](double x) { return value_v(k, s, x); };
  auto interior = [&](double x) {
    return k.Upsilon(x, s.a_star, s.b_star) - pa * zeta(sc, x);
  };
  // Payoff slope; g and h differ by a constant, so one expression serves
  // both boundaries.
  auto payoff_slope = [&](double x) { return -pa * zeta_prime(sc, x); };

  if (rep.has_lower) {
    const double a = s.a_star;
    const double probe = 1e-9 * std::max(1.0, a);
    rep.cont_lower = std::fabs(interior(a + probe) - k.payoff_g(a + probe));
    const double h = 1e-5 * std::max(1.0, a);
    rep.smooth_lower =
        std::fabs(one_sided_derivative(v, a, h) - payoff_slope(a));
  }
  if (rep.has_upper) {
    const double b = s.b_star.value();
    const double probe = 1e-9 * std::max(1.0, b);
    rep.cont_upper = std::fabs(interior(b - probe) - k.payoff_h(b - probe));
    const double h = 1e-5 * std::max(1.0, b);
    rep.smooth_upper =
        std::fabs(one_sided_derivative(v, b, -h) - payoff_slope(b));
  }
  return rep;
}

double equilibrium_premium(const ScaleCoefficients& sc,
                           const ContractTerms& terms_template, double q,
                           double x, double eps) {
  if (!(x > 0.0)) {
    throw std::invalid_argument(
        "equilibrium_premium: reference state x must be positive");
  }
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw std::invalid_argument(
        "equilibrium_premium: adjustment ratio q must be finite and >= 0");
  }
  const double z = zeta(sc, x);
  if (q == 1.0) {
    // Exercise changes nothing; the contract is the running CDS, with par
    // premium balancing protection against the premium leg.
    return sc.model.r * terms_template.alpha * z / (1.0 - z);
  }

  auto total_value = [&](double p) {
    ContractTerms t = terms_template;
    t.p = p;
    t.p_hat = q * p;
    t.alpha_hat = q * terms_template.alpha;
    return Valuation(sc, t, eps).value_V(x);
  };

  // V(x; p) decreases in p and is positive as p -> 0+ (free protection), so
  // only the upper end needs probing.
  double p_lo = 0.0;
  double p_hi = 10.0 * sc.model.r * (terms_template.alpha +
                                     terms_template.gamma_b);
  int doublings = 0;
  while (total_value(p_hi) > 0.0) {
    p_lo = p_hi;
    p_hi *= 2.0;
    if (++doublings > kPremiumDoublings) {
      throw NonConvergence(
          "equilibrium_premium: value stayed positive over the expanded "
          "premium bracket");
    }
  }
  for (int i = 0; i < kPremiumBisections; ++i) {
    const double p = 0.5 * (p_lo + p_hi);
    const double val = total_value(p);
    if (std::fabs(val) < kValueTol) return p;
    (val > 0.0 ? p_lo : p_hi) = p;
  }
  throw NonConvergence(
      "equilibrium_premium: bisection failed to drive |V| below tolerance");
}

}  // namespace swapgame
