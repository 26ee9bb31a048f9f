#include "swapgame/mc.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace swapgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-arg) below this threshold cannot flip a uniform draw.
constexpr double kTouchArgCutoff = 41.0;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void validate(const McConfig& cfg) {
  if (cfg.n_paths < 1) {
    throw std::invalid_argument("mc: n_paths must be at least 1");
  }
  if (!(cfg.grid_dt > 0.0)) {
    throw std::invalid_argument("mc: grid_dt must be positive");
  }
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

McEstimate make_estimate(std::vector<double>& samples, std::uint64_t seed) {
  McEstimate e;
  e.n = samples.size();
  e.seed = seed;
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples.data(), samples.size()) / n;
  if (samples.size() >= 2) {
    for (double& s : samples) {
      const double d = s - e.mean;
      s = d * d;
    }
    const double var = pairwise_sum(samples.data(), samples.size()) / (n - 1.0);
    e.std_err = std::sqrt(var / n);
  }
  return e;
}

/// Runs payoff over the configured paths (averaging antithetic pairs).
McEstimate run_paths(const McConfig& cfg,
                     const std::function<double(PathRng&)>& payoff) {
  validate(cfg);
  std::vector<double> samples;
  if (cfg.antithetic) {
    const std::size_t pairs = (cfg.n_paths + 1) / 2;
    samples.reserve(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
      PathRng plain(cfg.master_seed, k, false);
      PathRng mirror(cfg.master_seed, k, true);
      samples.push_back(0.5 * (payoff(plain) + payoff(mirror)));
    }
  } else {
    samples.reserve(cfg.n_paths);
    for (std::size_t k = 0; k < cfg.n_paths; ++k) {
      PathRng rng(cfg.master_seed, k, false);
      samples.push_back(payoff(rng));
    }
  }
  return make_estimate(samples, cfg.master_seed);
}

/// Pathwise difference f_new - f_base on identical streams.
McEstimate run_paired_difference(const McConfig& cfg,
                                 const std::function<double(PathRng&)>& f_new,
                                 const std::function<double(PathRng&)>& f_base) {
  auto diff = [&](std::uint64_t k, bool flip) {
    PathRng a(cfg.master_seed, k, flip);
    PathRng b(cfg.master_seed, k, flip);
    return f_new(a) - f_base(b);
  };
  validate(cfg);
  std::vector<double> samples;
  if (cfg.antithetic) {
    const std::size_t pairs = (cfg.n_paths + 1) / 2;
    samples.reserve(pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
      samples.push_back(0.5 * (diff(k, false) + diff(k, true)));
    }
  } else {
    samples.reserve(cfg.n_paths);
    for (std::size_t k = 0; k < cfg.n_paths; ++k) {
      samples.push_back(diff(k, false));
    }
  }
  return make_estimate(samples, cfg.master_seed);
}

/**
 * First-crossing offset within one Brownian step, sampled exactly.  a0 > 0
 * is the distance to the barrier at the left end, a1 at the right end;
 * a1 <= 0 means the crossing is certain, a1 > 0 conditions on a bridge
 * touch.  Given the endpoints, the crossing time is s = h z / (1 + z)
 * where (h - s) / s is generalized-inverse-Gaussian with index 1/2, so z
 * is plain inverse-Gaussian with mean a0/|a1| and shape a0^2/(nu^2 h) --
 * the same law for both modes.  Sampled by the Michael-Schucany-Haas
 * construction.
 */
double crossing_time(PathRng& rng, double a0, double a1, double h, double nu) {
  const double b = std::fabs(a1);
  if (!(b > 0.0)) return h;  // endpoint pinned on the barrier
  const double mean = a0 / b;
  const double shape = a0 * a0 / (nu * nu * h);
  const double y = [&] {
    const double n = rng.normal();
    return n * n;
  }();
  const double x =
      mean + 0.5 * mean * mean * y / shape -
      0.5 * (mean / shape) *
          std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
  const double z =
      rng.uniform() <= mean / (mean + x) ? x : mean * mean / x;
  if (!(z > 0.0)) return h;  // rounding collapse for extreme endpoints
  return h * (z / (1.0 + z));
}

ExitEvent lower_event(double lower) {
  return lower > 0.0 ? ExitEvent::kLower : ExitEvent::kDefault;
}

}  // namespace

double resolved_horizon(const McConfig& cfg, double r) {
  if (cfg.horizon > 0.0) return cfg.horizon;
  return std::log(1e4) / r;
}

double truncation_bound(const McConfig& cfg, double r) {
  return std::exp(-r * resolved_horizon(cfg, r));
}

PathRng::PathRng(std::uint64_t master_seed, std::uint64_t path_index,
                 bool flip)
    : flip_(flip) {
  const std::uint64_t base =
      master_seed + 0x9E3779B97F4A7C15ull * (path_index + 1);
  std::seed_seq seq{splitmix64(base), splitmix64(base ^ 0xA5A5A5A5A5A5A5A5ull),
                    splitmix64(base + 0x0123456789ABCDEFull),
                    splitmix64(~base)};
  gen_.seed(seq);
}

double PathRng::normal() {
  const double z = normal_(gen_);
  return flip_ ? -z : z;
}

double PathRng::uniform() {
  const double u = uniform_(gen_);
  return flip_ ? 1.0 - u : u;
}

double PathRng::exponential(double rate) {
  const double u = uniform();
  if (u >= 1.0) return kInf;
  return -std::log1p(-u) / rate;
}

PathOutcome simulate_exit(const ModelParams& m, double x0, double lower,
                          const UpperLevel& upper, double horizon,
                          double grid_dt, bool bridge, PathRng& rng) {
  const bool has_up = !upper.is_unbounded();
  const double B = has_up ? upper.value() : 0.0;
  const double nu2 = m.nu * m.nu;

  // With the bridge correction the segment law is exact for any step, so
  // only a second barrier forces a cap: crossing both inside one step is
  // the single neglected event, and capping h at 0.04 (B - lower)^2 / nu^2
  // keeps its probability below e^{-50}.  Without the correction the step
  // is the literal grid.
  double step_cap = kInf;
  if (!bridge) {
    step_cap = grid_dt;
  } else if (has_up && m.nu > 0.0) {
    step_cap = std::max(1e-6, 0.04 * (B - lower) * (B - lower) / nu2);
  }

  double t = 0.0;
  double x = x0;
  double to_jump = m.lambda > 0.0 ? rng.exponential(m.lambda) : kInf;
  while (t < horizon) {
    const bool jump_fires = to_jump < horizon - t;
    double seg = jump_fires ? to_jump : horizon - t;
    if (m.nu > 0.0) {
      while (seg > 0.0) {
        const double h = std::min(seg, step_cap);
        const double x1 = x + m.mu * h + m.nu * std::sqrt(h) * rng.normal();
        const double dl0 = x - lower;
        const double dl1 = x1 - lower;
        if (dl1 <= 0.0) {
          if (!bridge) return {lower > 0.0 && x1 > 0.0 ? ExitEvent::kLower
                                                       : ExitEvent::kDefault,
                               t + h, x1};
          const double tc = crossing_time(rng, dl0, dl1, h, m.nu);
          return {lower_event(lower), t + tc, lower};
        }
        if (has_up && x1 >= B) {
          const double tc =
              bridge ? crossing_time(rng, B - x, B - x1, h, m.nu) : h;
          return {ExitEvent::kUpper, t + tc, B};
        }
        if (bridge) {
          const double al = 2.0 * dl0 * dl1 / (nu2 * h);
          const double pl = al < kTouchArgCutoff ? std::exp(-al) : 0.0;
          double pu = 0.0;
          if (has_up) {
            const double au = 2.0 * (B - x) * (B - x1) / (nu2 * h);
            pu = au < kTouchArgCutoff ? std::exp(-au) : 0.0;
          }
          if (pl > 0.0 || pu > 0.0) {
            const double u = rng.uniform();
            if (u < pl) {
              const double tc = crossing_time(rng, dl0, dl1, h, m.nu);
              return {lower_event(lower), t + tc, lower};
            }
            if (u < pl + pu) {
              const double tc =
                  crossing_time(rng, B - x, B - x1, h, m.nu);
              return {ExitEvent::kUpper, t + tc, B};
            }
          }
        }
        x = x1;
        t += h;
        seg -= h;
      }
    } else {
      // No Gaussian part: the segment is a straight drift line with
      // deterministic crossings, and downward passage only creeps when the
      // drift points down.
      if (has_up && m.mu > 0.0) {
        const double hit = (B - x) / m.mu;
        if (hit <= seg) return {ExitEvent::kUpper, t + hit, B};
      } else if (m.mu < 0.0) {
        const double hit = (x - lower) / (-m.mu);
        if (hit <= seg) return {lower_event(lower), t + hit, lower};
      }
      x += m.mu * seg;
      t += seg;
    }
    if (!jump_fires) break;
    x -= rng.exponential(m.eta);
    if (x <= 0.0) return {ExitEvent::kDefault, t, x};
    if (lower > 0.0 && x <= lower) return {ExitEvent::kLower, t, x};
    to_jump = rng.exponential(m.lambda);
  }
  return {ExitEvent::kCensored, horizon, x};
}

PathOutcome simulate_default_time(const ModelParams& m, double x0,
                                  double horizon, double grid_dt, bool bridge,
                                  PathRng& rng) {
  return simulate_exit(m, x0, 0.0, UpperLevel::unbounded(), horizon, grid_dt,
                       bridge, rng);
}

McEstimate estimate_zeta(const ModelParams& m, double x0,
                         const McConfig& cfg) {
  m.validate();
  if (!(x0 > 0.0)) {
    throw std::invalid_argument("estimate_zeta: x0 must be positive");
  }
  const double T = resolved_horizon(cfg, m.r);
  return run_paths(cfg, [&](PathRng& rng) {
    const PathOutcome out =
        simulate_default_time(m, x0, T, cfg.grid_dt, cfg.bridge, rng);
    return out.event == ExitEvent::kDefault ? std::exp(-m.r * out.time) : 0.0;
  });
}

ExitTripleEstimate estimate_exit_triple(const ModelParams& m, double x,
                                        double a, double b,
                                        const McConfig& cfg) {
  m.validate();
  validate(cfg);
  if (!(0.0 < a && a < x && x < b) || !std::isfinite(b)) {
    throw std::invalid_argument(
        "estimate_exit_triple: needs 0 < a < x < b < infinity");
  }
  const double T = resolved_horizon(cfg, m.r);
  const UpperLevel upper(b);

  const std::size_t slots =
      cfg.antithetic ? (cfg.n_paths + 1) / 2 : cfg.n_paths;
  std::vector<double> up(slots, 0.0), down(slots, 0.0), jd(slots, 0.0);
  const int reps = cfg.antithetic ? 2 : 1;
  for (std::size_t k = 0; k < slots; ++k) {
    for (int repeat = 0; repeat < reps; ++repeat) {
      PathRng rng(cfg.master_seed, k, repeat == 1);
      const PathOutcome out =
          simulate_exit(m, x, a, upper, T, cfg.grid_dt, cfg.bridge, rng);
      const double w = 1.0 / reps;
      const double disc = std::exp(-m.r * out.time);
      if (out.event == ExitEvent::kUpper) up[k] += w * disc;
      if (out.event == ExitEvent::kLower || out.event == ExitEvent::kDefault) {
        down[k] += w * disc;
        if (out.state < 0.0) jd[k] += w * disc;
      }
    }
  }
  ExitTripleEstimate est;
  est.up = make_estimate(up, cfg.master_seed);
  est.down = make_estimate(down, cfg.master_seed);
  est.jump_default = make_estimate(jd, cfg.master_seed);
  return est;
}

namespace {

std::function<double(PathRng&)> game_payoff(const ModelParams& m,
                                            const GameKernel& kernel, double x,
                                            double lower,
                                            const UpperLevel& upper, double T,
                                            const McConfig& cfg) {
  return [&m, &kernel, x, lower, upper, T, &cfg](PathRng& rng) {
    const PathOutcome out =
        simulate_exit(m, x, lower, upper, T, cfg.grid_dt, cfg.bridge, rng);
    switch (out.event) {
      case ExitEvent::kUpper:
        // Spectrally negative paths cannot jump up: the buyer exercise
        // creeps, so the payoff is evaluated exactly at the barrier.
        assert(out.state == upper.value());
        return std::exp(-m.r * out.time) * kernel.payoff_h(out.state);
      case ExitEvent::kLower:
        return std::exp(-m.r * out.time) * kernel.payoff_g(out.state);
      case ExitEvent::kDefault:
      case ExitEvent::kCensored:
        return 0.0;
    }
    return 0.0;
  };
}

void check_band(double x, double lower, const UpperLevel& upper) {
  if (!(lower >= 0.0) || !(x > lower) ||
      (!upper.is_unbounded() && !(x < upper.value()))) {
    throw std::invalid_argument("mc: x must lie strictly inside the band");
  }
}

}  // namespace

McEstimate estimate_game_value(const ModelParams& m, const ContractTerms& terms,
                               double x, double lower, const UpperLevel& upper,
                               const McConfig& cfg) {
  check_band(x, lower, upper);
  const GameKernel kernel(build_coefficients(m), terms);
  const double T = resolved_horizon(cfg, m.r);
  return run_paths(cfg, game_payoff(m, kernel, x, lower, upper, T, cfg));
}

NashDeviationReport nash_deviation_test(const ModelParams& m,
                                        const ContractTerms& terms, double x,
                                        const EquilibriumSolution& sol,
                                        const std::vector<double>& factors,
                                        const McConfig& cfg) {
  if (!sol.nash) {
    throw std::invalid_argument(
        "nash_deviation_test: solution is not a Nash saddle");
  }
  check_band(x, sol.a_star, sol.b_star);
  const GameKernel kernel(build_coefficients(m), terms);
  const double T = resolved_horizon(cfg, m.r);

  NashDeviationReport report;
  const auto base_payoff =
      game_payoff(m, kernel, x, sol.a_star, sol.b_star, T, cfg);
  report.base = run_paths(cfg, base_payoff);

  for (double f : factors) {
    if (sol.a_star > 0.0) {
      const double a_dev = f * sol.a_star;
      if (a_dev > 0.0 && a_dev < x) {
        DeviationCheck check;
        check.level = a_dev;
        const auto dev_payoff =
            game_payoff(m, kernel, x, a_dev, sol.b_star, T, cfg);
        check.value = run_paths(cfg, dev_payoff);
        check.shift = run_paired_difference(cfg, dev_payoff, base_payoff);
        // The seller minimizes: moving off the saddle must not push the
        // value below it.
        check.pass = check.shift.mean >= -3.0 * check.shift.std_err;
        report.all_pass = report.all_pass && check.pass;
        report.seller.push_back(check);
      }
    }
    if (!sol.b_star.is_unbounded()) {
      const double b_dev = f * sol.b_star.value();
      if (b_dev > x && b_dev > sol.a_star) {
        DeviationCheck check;
        check.level = b_dev;
        const auto dev_payoff =
            game_payoff(m, kernel, x, sol.a_star, UpperLevel(b_dev), T, cfg);
        check.value = run_paths(cfg, dev_payoff);
        check.shift = run_paired_difference(cfg, dev_payoff, base_payoff);
        check.pass = check.shift.mean <= 3.0 * check.shift.std_err;
        report.all_pass = report.all_pass && check.pass;
        report.buyer.push_back(check);
      }
    }
  }
  return report;
}

std::vector<TrendPoint> epsilon_exercise_trend(
    const ModelParams& m, const ContractTerms& terms, double x,
    const UpperLevel& upper, const std::vector<double>& deltas,
    const McConfig& cfg) {
  std::vector<TrendPoint> trend;
  trend.reserve(deltas.size());
  for (double delta : deltas) {
    if (!(delta > 0.0) || !(delta < x)) {
      throw std::invalid_argument(
          "epsilon_exercise_trend: deltas must lie in (0, x)");
    }
    trend.push_back({delta, estimate_game_value(m, terms, x, delta, upper,
                                                cfg)});
  }
  return trend;
}

}  // namespace swapgame
