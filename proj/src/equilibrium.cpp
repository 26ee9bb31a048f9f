#include "swapgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace swapgame {

namespace {

constexpr int kBisectionCap = 200;
constexpr double kLevelTol = 1e-10;  // bisection width on threshold levels
constexpr double kSpanMax = 1e6;     // hard ceiling on bracket expansion
// Residual bounds certifying a smooth-fit B* when the |b_upper - b_lower|
// gap target is below what double precision can resolve in A.
constexpr double kFitTolPsiHat = 1e-8;
constexpr double kFitTolDeriv = 1e-6;

// First point of {f >= 0} inside (lo, hi], given f(lo) < 0 <= f(hi).
template <typename F>
double bisect_first_nonneg(F f, double lo, double hi, double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

ThresholdSolver::ThresholdSolver(ScaleCoefficients sc, ContractTerms terms)
    : kernel_(std::move(sc), terms) {}

double ThresholdSolver::a_lower() const {
  const ScaleCoefficients& sc = kernel_.scale();
  const ContractTerms& t = kernel_.terms();
  const double pg = t.p_check() + sc.model.r * t.gamma_s;
  const double ag = t.alpha_check() - t.gamma_s;
  const double arg =
      sc.model.lambda * ag * sc.phi_r / ((sc.phi_r + sc.model.eta) * pg);
  if (!(arg > 1.0)) return 0.0;  // psi_hat(A, inf) < 0 for all A >= 0
  return std::log(arg) / sc.model.eta;
}

double ThresholdSolver::a_upper() const {
  const ScaleCoefficients& sc = kernel_.scale();
  const ContractTerms& t = kernel_.terms();
  const double pg = t.p_check() + sc.model.r * t.gamma_s;
  const double ag = t.alpha_check() - t.gamma_s;
  const double arg = sc.model.lambda * ag / pg;
  if (!(arg > 1.0)) return 0.0;  // psi_hat(A, A+) < 0 for all A >= 0
  return std::log(arg) / sc.model.eta;
}

UpperLevel ThresholdSolver::b_upper(double a) const {
  // psi_hat(a, .) is strictly decreasing in the upper level (W is
  // log-concave), so a doubling bracket plus bisection finds the crossing.
  if (kernel_.psi_hat_at_a(a) <= 0.0) return UpperLevel(a);
  const ContractTerms& t = kernel_.terms();
  const double pg = t.p_check() + kernel_.scale().model.r * t.gamma_s;
  // The limit is exactly zero at the lower clip level; evaluated there it
  // comes out as noise of either sign, and a tiny negative would send the
  // bracket search after a crossing the finite-level evaluation cannot
  // resolve. Anything within rounding noise of zero counts as no crossing.
  if (kernel_.psi_hat(a, UpperLevel::unbounded()) >= -1e-13 * pg) {
    return UpperLevel::unbounded();
  }
  double last_pos = 1e-9;
  if (kernel_.psi_hat(a, UpperLevel(a + last_pos)) <= 0.0) {
    return UpperLevel(a + last_pos);
  }
  double y = 0.5;
  while (kernel_.psi_hat(a, UpperLevel(a + y)) > 0.0) {
    last_pos = y;
    y *= 2.0;
    if (y > kSpanMax) {
      throw NonConvergence("b_upper: no sign change below span " +
                           std::to_string(kSpanMax));
    }
  }
  auto f = [&](double yy) { return -kernel_.psi_hat(a, UpperLevel(a + yy)); };
  return UpperLevel(a + bisect_first_nonneg(f, last_pos, y, kLevelTol));
}

// Location of the first zero of Psi_hat(a, .), exploiting its structure:
// at a zero of Psi_hat the level derivative equals psi_hat, so Psi_hat can
// cross upward only where psi_hat > 0 (i.e. below b_upper(a)) and can never
// cross back downward there. Hence the crossing is unique, lies in
// (a, b_upper(a)], exists iff Psi_hat(a, b_upper(a)) >= 0, and Psi_hat is
// negative all the way up to it, which makes plain bisection valid.
UpperLevel ThresholdSolver::b_lower_given(double a, const UpperLevel& bu) const {
  if (!bu.is_unbounded() && bu.value() <= a) return UpperLevel::unbounded();

  auto locate = [&](double hi_y) {
    auto f = [&](double yy) { return kernel_.Psi_hat(a, UpperLevel(a + yy)); };
    return UpperLevel(a + bisect_first_nonneg(f, 1e-12, hi_y, kLevelTol));
  };

  if (!bu.is_unbounded()) {
    if (kernel_.Psi_hat(a, bu) < 0.0) return UpperLevel::unbounded();
    return locate(bu.value() - a);
  }

  // b_upper(a) = inf, so psi_hat(a, .) > 0 up to its limit psi_hat(a, inf)
  // = Phi Psi_hat(a, inf) >= 0.
  const double limit = kernel_.Psi_hat(a, UpperLevel::unbounded());
  const ContractTerms& t = kernel_.terms();
  const double pg = t.p_check() + kernel_.scale().model.r * t.gamma_s;
  const double tiny = 1e-13 * pg / kernel_.scale().phi_r;
  double target;
  if (limit > tiny) {
    // Psi_hat approaches a positive limit; a finite crossing must exist.
    target = limit / 2.0;
  } else {
    // Limit is zero (a sits at the lower clip level): the sign of Psi_hat at
    // large levels equals the sign of the bounded residual's limit,
    // p_check / r - gamma_b. Nonpositive means no crossing at all.
    const double residual_limit =
        t.p_check() / kernel_.scale().model.r - t.gamma_b;
    if (residual_limit <= 0.0) return UpperLevel::unbounded();
    target = 0.0;
  }
  double y = 0.5;
  while (kernel_.Psi_hat(a, UpperLevel(a + y)) <= target) {
    y *= 2.0;
    if (y > kSpanMax) {
      if (limit > tiny) {
        throw NonConvergence("b_lower: positive limit but no crossing below "
                             "span " + std::to_string(kSpanMax));
      }
      return UpperLevel::unbounded();
    }
  }
  return locate(y);
}

UpperLevel ThresholdSolver::b_lower(double a) const {
  return b_lower_given(a, b_upper(a));
}

UpperLevel ThresholdSolver::b_mid(double a) const {
  // First level where the smooth-fit function d/dB Psi_hat(a, .) turns
  // nonpositive; it starts positive at a+ and tends to zero at infinity.
  // The function is a smooth combination of a handful of exponentials, so a
  // geometric scan cannot skip over its first sign change.
  //
  // The derivative is the difference psi_hat - (W'/W) Psi_hat of two terms
  // that converge to each other, so once its true magnitude sinks below the
  // cancellation noise of that difference, an apparent sign flip means
  // nothing. All components decay strictly faster than e^{-Phi y} except the
  // one with coefficient (p_check / r - gamma_b) / c_phi, so past the noise
  // horizon the sign is that of p_check / r - gamma_b.
  const ScaleCoefficients& sc = kernel_.scale();
  const ContractTerms& t = kernel_.terms();
  const double asym = t.p_check() / sc.model.r - t.gamma_b;
  const double eps_m = std::numeric_limits<double>::epsilon();
  const double xi_min = sc.xi.empty() ? sc.phi_r : sc.xi.front();
  const double window = std::max(80.0, 40.0 / std::min(sc.phi_r, xi_min));
  double y_prev = std::max(1e-8, a * 1e-3);
  if (kernel_.dPsi_hat_db(a, a + y_prev) <= 0.0) return UpperLevel(a + y_prev);
  for (double y = y_prev * 1.001; y <= window; y *= 1.001) {
    const double val = kernel_.dPsi_hat_db(a, a + y);
    if (val <= 0.0) {
      const double psi = kernel_.psi_hat(a, UpperLevel(a + y));
      const double noise = 32.0 * eps_m * (std::fabs(psi) +
                                           std::fabs(psi - val));
      if (-val > noise) {
        auto f = [&](double yy) { return -kernel_.dPsi_hat_db(a, a + yy); };
        return UpperLevel(a + bisect_first_nonneg(f, y_prev, y, kLevelTol));
      }
      // Sunk into the noise tail without a genuine crossing.
      return asym > 0.0 ? UpperLevel(a + y) : UpperLevel::unbounded();
    }
    y_prev = y;
  }
  if (asym > 0.0) {
    throw NonConvergence(
        "b_mid: smooth-fit function stayed positive across the scan window "
        "despite a positive asymptote");
  }
  return UpperLevel::unbounded();
}

EquilibriumSolution ThresholdSolver::solve(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("solve: eps must be > 0");
  const double nu = kernel_.scale().model.nu;
  const double a_lo = a_lower();
  const double a_hi = a_upper();

  auto case_1 = [&](double a, double b) {
    EquilibriumSolution s;
    s.a_star = a;
    s.b_star = UpperLevel(b);
    s.case_id = 1;
    s.nash = true;
    s.fit_psi_hat = kernel_.Psi_hat(a, s.b_star);
    s.fit_dpsi_hat_db = kernel_.dPsi_hat_db(a, b);
    return s;
  };

  // Step 1-1: the seller never moves first; the buyer solves a one-sided
  // stopping problem with threshold b_mid(0).
  if (a_hi == 0.0 ||
      (a_lo == 0.0 && b_lower(0.0).raw() >= b_upper(0.0).raw())) {
    EquilibriumSolution s;
    s.a_star = 0.0;
    s.b_star = b_mid(0.0);
    s.case_id = s.b_star.is_unbounded() ? 4 : 3;
    s.nash = !(nu > 0.0);
    if (s.b_star.is_unbounded()) {
      s.fit_psi_hat = kernel_.Psi_hat(0.0, UpperLevel::unbounded());
      s.fit_dpsi_hat_db = 0.0;
    } else {
      s.fit_psi_hat = kernel_.Psi_hat(0.0, s.b_star);
      s.fit_dpsi_hat_db = kernel_.dPsi_hat_db(0.0, s.b_star.value());
    }
    return s;
  }

  // Step 1-2: at a_lower the continuous-fit value is exact and the upper
  // threshold runs away; the seller stops at a_lower, the buyer never does.
  const UpperLevel bl_at_lo = b_lower(a_lo);
  if (a_lo > 0.0 && bl_at_lo.is_unbounded()) {
    EquilibriumSolution s;
    s.a_star = a_lo;
    s.b_star = UpperLevel::unbounded();
    s.case_id = 2;
    s.nash = true;
    s.fit_psi_hat = kernel_.Psi_hat(a_lo, UpperLevel::unbounded());
    s.fit_dpsi_hat_db = 0.0;
    return s;
  }

  // Endpoint tie: both maps already meet at an interval end.
  for (double a : {a_lo, a_hi}) {
    const UpperLevel bu = b_upper(a);
    const UpperLevel bl = (a == a_lo) ? bl_at_lo : b_lower_given(a, bu);
    if (!bu.is_unbounded() && !bl.is_unbounded() &&
        std::fabs(bu.value() - bl.value()) <= eps) {
      return case_1(a, bl.value());
    }
  }

  // Steps 2-3: bisect on A. b_upper decreases and b_lower increases in A,
  // so sign(b_upper - b_lower) brackets A*.
  //
  // At A* the map Psi_hat(A*, .) touches zero tangentially at B* (smooth
  // fit), so the gap |b_upper - b_lower| shrinks only like sqrt(A* - A) and
  // a small eps can be unreachable in double precision. When the A-interval
  // is exhausted, accept the smooth-fit point b_upper(A) as B* provided the
  // fit residuals are tight, and fail otherwise.
  double lo = a_lo;
  double hi = a_hi;
  for (int iter = 0; iter < kBisectionCap; ++iter) {
    const double a = 0.5 * (lo + hi);
    const UpperLevel bu = b_upper(a);
    const UpperLevel bl = b_lower_given(a, bu);
    if (!bu.is_unbounded() && !bl.is_unbounded() &&
        std::fabs(bu.value() - bl.value()) <= eps) {
      return case_1(a, bl.value());
    }
    if (hi - lo <= 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::fabs(a))) {
      // The certificate below is a sufficient equilibrium check on its own,
      // so any candidate pair that passes is a valid answer. Besides the
      // midpoint, try the bracket ends: when A* sits exactly on a_lower the
      // two maps flip between finite and unbounded within one ulp of A and
      // only one side of the bracket yields a finite level.
      for (double ac : {a, lo, hi}) {
        const UpperLevel bu_c = b_upper(ac);
        const UpperLevel bl_c = b_lower_given(ac, bu_c);
        for (const UpperLevel* cand : {&bu_c, &bl_c}) {
          if (cand->is_unbounded()) continue;
          if (std::fabs(kernel_.Psi_hat(ac, *cand)) <= kFitTolPsiHat &&
              std::fabs(kernel_.dPsi_hat_db(ac, cand->value())) <=
                  kFitTolDeriv) {
            return case_1(ac, cand->value());
          }
        }
      }
      break;
    }
    if (bu.raw() > bl.raw()) {
      lo = a;
    } else {
      hi = a;
    }
  }
  throw NonConvergence(
      "solve: threshold bisection failed to close the gap within " +
      std::to_string(kBisectionCap) + " iterations");
}

EquilibriumSolution solve_thresholds(const ModelParams& m,
                                     const ContractTerms& terms, double eps) {
  return ThresholdSolver(build_coefficients(m), terms).solve(eps);
}

}  // namespace swapgame
