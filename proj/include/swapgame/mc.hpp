#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "swapgame/equilibrium.hpp"
#include "swapgame/kernel.hpp"

namespace swapgame {

/// Monte Carlo run settings.  horizon <= 0 picks T with e^{-rT} = 1e-4;
/// grid_dt is the Brownian step used when the bridge correction is disabled
/// (with the correction on, segments between jump epochs are sampled exactly
/// and need no grid).  bridge = false is a test hook that falls back to
/// endpoint checks on the grid_dt grid.
struct McConfig {
  std::size_t n_paths = 100000;
  double horizon = 0.0;
  double grid_dt = 1.0 / 250.0;
  std::uint64_t master_seed = 1;
  bool antithetic = true;
  bool bridge = true;
};

double resolved_horizon(const McConfig& cfg, double r);
/// Upper bound e^{-rT} on the contribution of paths censored at the horizon.
double truncation_bound(const McConfig& cfg, double r);

/// Sample statistics of one estimator run.  n counts independent samples:
/// antithetic pairs collapse to a single sample, so n = ceil(n_paths / 2)
/// when pairing is on.
struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Per-path random variate source.  Streams are derived from
/// (master_seed, path_index) by a counter-based split, so path i draws the
/// same variates no matter how paths are scheduled.  The flipped source
/// mirrors every variate (z -> -z, u -> 1 - u) for antithetic pairing.
class PathRng {
 public:
  PathRng(std::uint64_t master_seed, std::uint64_t path_index, bool flip);

  double normal();
  double uniform();
  double exponential(double rate);

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  bool flip_;
};

enum class ExitEvent {
  kUpper,     ///< crept up to the upper barrier (state == upper exactly)
  kLower,     ///< stopped in (0, lower]: crept to it or jumped into it
  kDefault,   ///< reached or overshot zero (state <= 0)
  kCensored,  ///< still inside the band at the horizon
};

struct PathOutcome {
  ExitEvent event;
  double time;
  double state;
};

/**
 * One path of the jump diffusion from x0, stopped at the first of: upward
 * creep to `upper`, drop to (0, lower], drop to or below zero, or the
 * horizon.  Between exponential jump epochs the path is Brownian with
 * drift; crossings inside a segment are detected by the exact bridge
 * touch probability and located by sampling the conditional first-crossing
 * time (inverse-Gaussian), so the sampled law does not depend on a time
 * grid.  Jumps are applied atomically and the
 * landing point alone decides the event.  lower = 0 disables the exercise
 * barrier, leaving only default.
 */
PathOutcome simulate_exit(const ModelParams& m, double x0, double lower,
                          const UpperLevel& upper, double horizon,
                          double grid_dt, bool bridge, PathRng& rng);

/// Default time only: simulate_exit with no barriers except zero.
PathOutcome simulate_default_time(const ModelParams& m, double x0,
                                  double horizon, double grid_dt, bool bridge,
                                  PathRng& rng);

/// E[e^{-r sigma0}] from x0, the Monte Carlo counterpart of zeta(x0).
/// Censored paths contribute zero, undershooting by at most
/// truncation_bound(cfg, r).
McEstimate estimate_zeta(const ModelParams& m, double x0, const McConfig& cfg);

/// Discounted indicators of how the band (a, b) is left, the counterparts
/// of game_kernel exit_identities: up-creep, any exit at or below a, and
/// the sub-event of jumping straight through zero.
struct ExitTripleEstimate {
  McEstimate up;
  McEstimate down;
  McEstimate jump_default;
};
ExitTripleEstimate estimate_exit_triple(const ModelParams& m, double x,
                                        double a, double b,
                                        const McConfig& cfg);

/// Value of the canonical stopping game when the seller exercises at
/// `lower` and the buyer at `upper`: pays h at the upper creep, g at the
/// lower exit state, zero at default or censoring.  Estimates value_v when
/// the barriers are the equilibrium pair.
McEstimate estimate_game_value(const ModelParams& m, const ContractTerms& terms,
                               double x, double lower, const UpperLevel& upper,
                               const McConfig& cfg);

/// One checked threshold deviation.  shift estimates (deviation - saddle)
/// pathwise on common random numbers; pass applies the one-sided 3 stderr
/// rule in the direction the deviating party would want.
struct DeviationCheck {
  double level = 0.0;
  McEstimate value;
  McEstimate shift;
  bool pass = false;
};

struct NashDeviationReport {
  McEstimate base;
  std::vector<DeviationCheck> seller;
  std::vector<DeviationCheck> buyer;
  bool all_pass = true;
};

/**
 * Saddle check by simulation: for each factor f, replay the game with the
 * seller moved to f * A* (buyer fixed) and the buyer moved to f * B*
 * (seller fixed), sharing the equilibrium run's random numbers.  A seller
 * deviation passes when it does not lower the value beyond 3 stderr of the
 * pathwise shift; a buyer deviation when it does not raise it.  Requires a
 * solution with nash = true; deviations that leave (0, x) or an unbounded
 * side are skipped.
 */
NashDeviationReport nash_deviation_test(const ModelParams& m,
                                        const ContractTerms& terms, double x,
                                        const EquilibriumSolution& sol,
                                        const std::vector<double>& factors,
                                        const McConfig& cfg);

/// Game value against the buyer's equilibrium level when the seller
/// exercises at delta, for a sequence of deltas.  Used to exhibit the
/// epsilon-optimal behavior when the saddle degenerates to A* = 0: the
/// values decrease toward the analytic value as delta -> 0, but no single
/// delta attains it.  Common random numbers across the sequence.
struct TrendPoint {
  double level;
  McEstimate value;
};
std::vector<TrendPoint> epsilon_exercise_trend(const ModelParams& m,
                                               const ContractTerms& terms,
                                               double x,
                                               const UpperLevel& upper,
                                               const std::vector<double>& deltas,
                                               const McConfig& cfg);

}  // namespace swapgame
