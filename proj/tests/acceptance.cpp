// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Stated runtime limits are measured and enforced.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "swapgame/equilibrium.hpp"
#include "swapgame/kernel.hpp"
#include "swapgame/mc.hpp"
#include "swapgame/model.hpp"
#include "swapgame/scale.hpp"
#include "swapgame/valuation.hpp"

using namespace swapgame;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool g_all_pass = true;

void report(int id, bool pass, const std::string& detail, double secs) {
  g_all_pass = g_all_pass && pass;
  std::printf("criterion %02d %s  %s  [%.2fs]\n", id, pass ? "PASS" : "FAIL",
              detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

ModelParams calibrated_defaults() {
  ModelParams m;
  m.mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
  return m;
}

bool nonincreasing(const std::vector<double>& v, double slack = 1e-12) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + slack) return false;
  }
  return true;
}

// --- criterion 1: drift calibration value and speed ------------------------
void criterion_1() {
  volatile double r = 0.03, nu = 0.2, lambda = 1.0, eta = 2.0;
  const auto t0 = Clock::now();
  const double mu = calibrate_drift(r, nu, lambda, eta);
  const double secs = seconds_since(t0);
  const double err = std::fabs(mu - 0.3433);
  const bool pass = err <= 5e-5 && secs < 1e-3;
  report(1, pass,
         fmt("calibration: mu=%.6f |mu-0.3433|=%.2e (tol 5e-5), %.3g ms "
             "(limit 1 ms)",
             mu, err, secs * 1e3),
         secs);
}

// --- criterion 2: Laplace transform identity of W ---------------------------
void criterion_2() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ScaleCoefficients sc = build_coefficients(m);
  double worst = 0.0;
  double worst_tail = 0.0;
  for (double gap : {0.5, 1.0, 2.0}) {
    const double s = sc.phi_r + gap;
    const double X = 10.0 + 40.0 / gap;
    // W(x) <= c_phi e^{phi_r x}, so the discarded tail is bounded by
    // c_phi e^{-gap X} / gap; it must sit far below the 1e-6 tolerance.
    const double tail =
        (laplace_exponent(m, s) - m.r) * sc.c_phi * std::exp(-gap * X) / gap;
    worst_tail = std::max(worst_tail, tail);
    const double integral = oracles::integrate(
        [&](double x) { return std::exp(-s * x) * W(sc, x); }, 0.0, X);
    const double resid =
        std::fabs((laplace_exponent(m, s) - m.r) * integral - 1.0);
    worst = std::max(worst, resid);
  }
  const double secs = seconds_since(t0);
  const bool pass = worst < 1e-6 && worst_tail < 1e-7 && secs < 1.0;
  report(2, pass,
         fmt("Laplace identity: max residual %.2e (tol 1e-6), tail bound "
             "%.1e, %.3g s (limit 1 s)",
             worst, worst_tail, secs),
         secs);
}

// --- criterion 3: boundary behavior of W ------------------------------------
void criterion_3() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ScaleCoefficients sc = build_coefficients(m);
  const double w0 = W(sc, 0.0);
  const double slope_err = std::fabs(W_prime(sc, 0.0) - 2.0 / (m.nu * m.nu));
  const bool pass = w0 == 0.0 && slope_err < 1e-10;
  report(3, pass,
         fmt("boundary: W(0)=%g, |W'(0+)-2/nu^2|=%.2e (tol 1e-10)", w0,
             slope_err),
         seconds_since(t0));
}

// --- criterion 4: zeta against simulation -----------------------------------
void criterion_4() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const double truth = zeta(build_coefficients(m), 1.5);
  McConfig cfg;
  cfg.n_paths = 100000;
  const McEstimate est = estimate_zeta(m, 1.5, cfg);
  const double secs = seconds_since(t0);
  const double dev = std::fabs(est.mean - truth);
  const bool pass = dev <= 3.0 * est.std_err && secs < 60.0;
  report(4, pass,
         fmt("zeta vs MC: analytic %.6f, mc %.6f +- %.1e (|dev|=%.2fse), "
             "%.2f s (limit 60 s)",
             truth, est.mean, est.std_err, dev / est.std_err, secs),
         secs);
}

// --- criterion 5: two-barrier exit identities vs simulation ------------------
void criterion_5() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ExitIdentities id =
      exit_identities(build_coefficients(m), 1.5, 0.5, 2.5);
  McConfig cfg;
  cfg.n_paths = 100000;
  const ExitTripleEstimate est = estimate_exit_triple(m, 1.5, 0.5, 2.5, cfg);
  const double du = std::fabs(est.up.mean - id.up) / est.up.std_err;
  const double dd = std::fabs(est.down.mean - id.down) / est.down.std_err;
  const double dj =
      std::fabs(est.jump_default.mean - id.jump_default) /
      est.jump_default.std_err;
  const bool pass = du <= 3.0 && dd <= 3.0 && dj <= 3.0;
  report(5, pass,
         fmt("exit identities: |dev| up %.2fse, down %.2fse, jump-default "
             "%.2fse (tol 3se each)",
             du, dd, dj),
         seconds_since(t0));
}

// --- criterion 6: case-1 fit residuals and smoothness ------------------------
void criterion_6() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const Valuation val(build_coefficients(m), ContractTerms{});
  const EquilibriumSolution& sol = val.solution();
  const SmoothnessReport rep = smoothness_report(val);
  const bool pass = sol.case_id == 1 && std::fabs(sol.fit_psi_hat) < 1e-8 &&
                    std::fabs(sol.fit_dpsi_hat_db) < 1e-6 &&
                    rep.smooth_lower_applies && rep.cont_upper < 1e-6 &&
                    rep.smooth_lower < 1e-6;
  report(6, pass,
         fmt("case-1 fit: |Psi_hat|=%.1e (tol 1e-8), |dPsi_hat_db|=%.1e "
             "(tol 1e-6), cont@B*=%.1e, smooth@A*=%.1e (tol 1e-6)",
             std::fabs(sol.fit_psi_hat), std::fabs(sol.fit_dpsi_hat_db),
             rep.cont_upper, rep.smooth_lower),
         seconds_since(t0));
}

// --- criterion 7: 20x20 grid search brackets the saddle ----------------------
void criterion_7() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  ContractTerms terms;
  const EquilibriumSolution sol = solve_thresholds(m, terms);
  const double A = sol.a_star;
  const double B = sol.b_star.value();

  const int n = 20;
  std::vector<double> As(n), Bs(n);
  for (int i = 0; i < n; ++i) {
    As[i] = 0.10 + (1.45 - 0.10) * i / (n - 1.0);
    Bs[i] = 1.70 + (6.00 - 1.70) * i / (n - 1.0);
  }
  const double dA = As[1] - As[0];
  const double dB = Bs[1] - Bs[0];

  McConfig cfg;
  cfg.n_paths = 50000;
  std::vector<std::vector<double>> M(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M[i][j] =
          estimate_game_value(m, terms, 1.5, As[i], UpperLevel(Bs[j]), cfg)
              .mean;
    }
  }
  // Empirical saddle: the buyer's best column among seller-minimized ones.
  int best_i = 0, best_j = 0;
  double best = -1e300;
  for (int j = 0; j < n; ++j) {
    int arg = 0;
    for (int i = 1; i < n; ++i) {
      if (M[i][j] < M[arg][j]) arg = i;
    }
    if (M[arg][j] > best) {
      best = M[arg][j];
      best_i = arg;
      best_j = j;
    }
  }
  const double secs = seconds_since(t0);
  const double off_a = std::fabs(As[best_i] - A);
  const double off_b = std::fabs(Bs[best_j] - B);
  const bool pass = off_a <= dA && off_b <= dB && secs < 600.0;
  report(7, pass,
         fmt("grid saddle: located (%.4f, %.4f) vs (%.4f, %.4f), offsets "
             "(%.2f, %.2f) cells (tol 1), %.0f s (limit 600 s)",
             As[best_i], Bs[best_j], A, B, off_a / dA, off_b / dB, secs),
         secs);
}

// --- criterion 8: +-20% deviations cannot beat the saddle --------------------
void criterion_8() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  ContractTerms terms;
  const EquilibriumSolution sol = solve_thresholds(m, terms);
  McConfig cfg;
  cfg.n_paths = 30000;
  const NashDeviationReport rep =
      nash_deviation_test(m, terms, 1.5, sol, {0.8, 1.2}, cfg);
  std::string shifts;
  for (const DeviationCheck& d : rep.seller) {
    shifts += fmt(" seller@%.3f %+0.1e", d.level, d.shift.mean);
  }
  for (const DeviationCheck& d : rep.buyer) {
    shifts += fmt(" buyer@%.3f %+0.1e", d.level, d.shift.mean);
  }
  report(8, rep.all_pass, "nash deviations (3se one-sided):" + shifts,
         seconds_since(t0));
}

// --- criterion 9: value-curve shapes for the four contracts ------------------
void criterion_9() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ScaleCoefficients sc = build_coefficients(m);

  ContractTerms cancel;
  cancel.p_hat = 0.0;
  cancel.alpha_hat = 0.0;
  const Valuation val_cancel(sc, cancel);
  ContractTerms down;
  const Valuation val_down(sc, down);
  ContractTerms up;
  up.p_hat = 1.5 * up.p;
  up.alpha_hat = 1.5 * up.alpha;
  const Valuation val_up(sc, up);

  std::vector<double> grid;
  for (int i = 0; i < 300; ++i) grid.push_back(0.02 + (8.0 - 0.02) * i / 299.0);

  const double A = val_cancel.solution().a_star;
  const double B = val_cancel.solution().b_star.value();
  double clamp_err = 0.0;
  std::vector<double> vc, vd, vv, vu;
  for (double x : grid) {
    vc.push_back((down.p / m.r + down.alpha) * zeta(sc, x) - down.p / m.r);
    vd.push_back(val_down.value_V(x));
    vv.push_back(val_cancel.value_V(x));
    vu.push_back(val_up.value_V(x));
    if (x <= A) clamp_err = std::max(clamp_err, std::fabs(vv.back() - 0.10));
    if (x >= B) clamp_err = std::max(clamp_err, std::fabs(vv.back() + 0.10));
  }
  const bool mono = nonincreasing(vc) && nonincreasing(vd) &&
                    nonincreasing(vv) && nonincreasing(vu);
  const bool pass = clamp_err < 1e-12 && mono;
  report(9, pass,
         fmt("value curves: cancellation clamp error %.1e at +-0.10 (tol "
             "1e-12), all four curves nonincreasing: %s",
             clamp_err, mono ? "yes" : "no"),
         seconds_since(t0));
}

// --- criterion 10: thresholds fall with the premium; mirror symmetry ---------
void criterion_10() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ScaleCoefficients sc = build_coefficients(m);
  std::vector<double> a_curve, b_curve;
  for (int i = 0; i < 50; ++i) {
    ContractTerms t;
    t.p = 0.02 + (0.08 - 0.02) * i / 49.0;
    t.p_hat = 0.5 * t.p;
    const EquilibriumSolution sol = solve_thresholds(m, t);
    a_curve.push_back(sol.a_star);
    b_curve.push_back(sol.b_star.raw());
  }
  const bool mono = nonincreasing(a_curve) && nonincreasing(b_curve);

  double sym_err = 0.0;
  for (double p : {0.03, 0.05, 0.07}) {
    ContractTerms u;
    u.p = p;
    u.alpha = 1.0;
    u.p_hat = p + 0.03;
    u.alpha_hat = 1.6;
    u.gamma_b = 0.12;
    u.gamma_s = 0.03;
    ContractTerms d;
    d.p = p + 0.03;
    d.alpha = 1.6;
    d.p_hat = p;
    d.alpha_hat = 1.0;
    d.gamma_b = 0.03;
    d.gamma_s = 0.12;
    const Valuation vu(sc, u);
    const Valuation vd(sc, d);
    sym_err = std::max(
        sym_err,
        std::fabs(vu.solution().a_star - vd.solution().a_star));
    sym_err = std::max(sym_err, std::fabs(vu.solution().b_star.raw() -
                                          vd.solution().b_star.raw()));
  }
  const bool pass = mono && sym_err < 1e-8;
  report(10, pass,
         fmt("threshold curves: A*(p), B*(p) nonincreasing over 50 points: "
             "%s; step-up/down symmetry error %.1e (tol 1e-8)",
             mono ? "yes" : "no", sym_err),
         seconds_since(t0));
}

// --- criterion 11: equilibrium premium monotone in the fees ------------------
void criterion_11() {
  const auto t0 = Clock::now();
  const ModelParams m = calibrated_defaults();
  const ScaleCoefficients sc = build_coefficients(m);
  const double q = 0.5;
  const double x = 1.5;

  double residual = 0.0;
  auto premium_at = [&](double gb, double gs) {
    ContractTerms t;
    t.gamma_b = gb;
    t.gamma_s = gs;
    const double p_star = equilibrium_premium(sc, t, q, x);
    ContractTerms at;
    at.p = p_star;
    at.p_hat = q * p_star;
    at.alpha_hat = q * at.alpha;
    at.gamma_b = gb;
    at.gamma_s = gs;
    residual = std::max(residual,
                        std::fabs(Valuation(sc, at).value_V(x)));
    return p_star;
  };

  bool inc_s = true, dec_b = true;
  double prev = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double g = 0.02 + (0.20 - 0.02) * i / 19.0;
    const double ps = premium_at(0.10, g);
    if (i > 0 && ps <= prev) inc_s = false;
    prev = ps;
  }
  prev = -1.0;
  for (int i = 0; i < 20; ++i) {
    const double g = 0.02 + (0.20 - 0.02) * i / 19.0;
    const double ps = premium_at(g, 0.10);
    if (i > 0 && ps >= prev) dec_b = false;
    prev = ps;
  }
  const bool pass = inc_s && dec_b && residual < 1e-8;
  report(11, pass,
         fmt("premium sweeps: p*(gamma_s) strictly increasing: %s, "
             "p*(gamma_b) strictly decreasing: %s, max |V(p*)|=%.1e (tol "
             "1e-8)",
             inc_s ? "yes" : "no", dec_b ? "yes" : "no", residual),
         seconds_since(t0));
}

// --- criterion 12: monotonicity properties across random draws ---------------
void criterion_12() {
  const auto t0 = Clock::now();
  int failures = 0;
  std::string first_failure;
  for (int seed = 1; seed <= 100; ++seed) {
    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    auto uni = [&gen](double lo, double hi) {
      return std::uniform_real_distribution<double>(lo, hi)(gen);
    };
    ModelParams m;
    m.r = uni(0.02, 0.06);
    m.nu = uni(0.10, 0.40);
    m.lambda = uni(0.50, 2.50);
    m.eta = uni(0.80, 3.00);
    m.mu = calibrate_drift(m.r, m.nu, m.lambda, m.eta);
    ContractTerms t;
    const double q = uni(0.20, 0.60);
    t.p = uni(0.02, 0.06);
    t.p_hat = q * t.p;
    t.alpha_hat = q * t.alpha;
    t.gamma_s = uni(0.10, 1.0) * 0.5 * (t.alpha - t.alpha_hat);
    t.gamma_b = uni(0.01, 0.30);

    std::string why;
    try {
      const ScaleCoefficients sc = build_coefficients(m);
      const GameKernel kernel(sc, t);
      const ThresholdSolver solver(sc, t);
      const double a_lo = solver.a_lower();
      const double a_hi = solver.a_upper();
      if (a_hi < a_lo) why = "a_upper < a_lower";

      const auto decreasing = [](const std::vector<double>& v, double tol) {
        for (std::size_t i = 1; i < v.size(); ++i) {
          if (v[i] >= v[i - 1] + tol) return false;
        }
        return true;
      };

      if (why.empty()) {
        // psi_hat falls in A at fixed B (finite and unbounded).  The span
        // covers (0, b_fix) even when a_upper clips to zero.
        const double span = std::max(a_hi, 1.0);
        const double b_fix = span + 1.5;
        std::vector<double> in_a, in_a_inf;
        for (double w : {0.1, 0.4, 0.7, 1.0}) {
          in_a.push_back(kernel.psi_hat(w * span, UpperLevel(b_fix)));
          in_a_inf.push_back(
              kernel.psi_hat(w * span, UpperLevel::unbounded()));
        }
        // ...and in B at fixed A.
        const double a_fix = 0.5 * span;
        std::vector<double> in_b;
        for (double b = a_fix + 0.3; b < a_fix + 2.0; b += 0.4) {
          in_b.push_back(kernel.psi_hat(a_fix, UpperLevel(b)));
        }
        if (!decreasing(in_a, 1e-10) || !decreasing(in_a_inf, 1e-10)) {
          why = "psi_hat not decreasing in A";
        } else if (!decreasing(in_b, 1e-10)) {
          why = "psi_hat not decreasing in B";
        }
        // kappa falls in the barrier argument.
        const double xk = span + 1.2;
        std::vector<double> ks;
        for (double a : {0.0, 0.3 * xk, 0.6 * xk, 0.9 * xk}) {
          ks.push_back(kappa(sc, xk, a));
        }
        if (why.empty() && !decreasing(ks, 1e-10)) {
          why = "kappa not decreasing in A";
        }
      }

      // b_lower rises and b_upper falls across (a_lower, a_upper); raw()
      // compares unbounded levels as +inf.
      if (why.empty() && a_hi > a_lo + 1e-9) {
        double prev_lo = 0.0, prev_hi = 0.0;
        bool first = true;
        for (double w : {0.2, 0.4, 0.6, 0.8}) {
          const double a = a_lo + w * (a_hi - a_lo);
          const double bl = solver.b_lower(a).raw();
          const double bu = solver.b_upper(a).raw();
          if (!first) {
            if (!(bl >= prev_lo - 1e-7)) why = "b_lower not nondecreasing";
            if (why.empty() && !(bu <= prev_hi + 1e-7)) {
              why = "b_upper not nonincreasing";
            }
            if (!why.empty()) break;
          }
          prev_lo = bl;
          prev_hi = bu;
          first = false;
        }
      }
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (!why.empty()) {
      ++failures;
      if (first_failure.empty()) {
        first_failure = fmt(" (first: seed %d, %s)", seed, why.c_str());
      }
    }
  }
  report(12, failures == 0,
         fmt("monotonicity suite: %d/100 random draws clean%s",
             100 - failures, first_failure.c_str()),
         seconds_since(t0));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf(g_all_pass ? "acceptance: all 12 criteria passed\n"
                         : "acceptance: FAILURES present\n");
  return g_all_pass ? 0 : 1;
}
