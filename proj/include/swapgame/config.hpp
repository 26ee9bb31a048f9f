#pragma once

#include <stdexcept>
#include <string>

#include "swapgame/kernel.hpp"
#include "swapgame/mc.hpp"
#include "swapgame/model.hpp"

namespace swapgame {

/// Raised on malformed or contradictory configuration input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * One run of the tool, as read from a flat key-value file with [section]
 * headers and '#' comments.  Every key has a default, so an empty file is a
 * valid configuration describing the standard example: calibrated drift,
 * unit notional, proportional step factor q = 0.5, and 1000 bps fees.
 *
 * The stepped terms come either from q (p_hat = q p, alpha_hat = q alpha)
 * or from explicit p_hat / alpha_hat keys; mixing the two styles is an
 * error, since silently preferring one would mask a typo in the other.
 */
struct RunConfig {
  // [model]
  double r = 0.03;
  double nu = 0.2;
  double lambda = 1.0;
  double eta = 2.0;
  double mu = 0.0;
  bool calibrate = true;  ///< mu = calibrate: solve phi(1) = r for the drift

  // [contract]
  double p = 0.05;
  double alpha = 1.0;
  double gamma_b = 0.10;
  double gamma_s = 0.10;
  bool has_q = true;
  double q = 0.5;
  double p_hat = 0.0;      ///< used only when has_q is false
  double alpha_hat = 0.0;  ///< used only when has_q is false
  double x = 1.5;          ///< evaluation state for values and premia

  // [numerics]
  double eps = 1e-8;  ///< threshold-solver gap target

  // [grid]
  double x_min = 0.01;
  double x_max = 8.0;
  int x_points = 200;
  double p_min = 0.02;
  double p_max = 0.08;
  int p_points = 50;
  double gamma_min = 0.02;
  double gamma_max = 0.20;
  int gamma_points = 20;
  std::string sweep = "gamma_s";  ///< fee varied by the gamma sweep

  // [mc]
  McConfig mc;

  // [output]
  int precision = 10;  ///< significant digits in printed floats
  std::string out;     ///< CSV destination; empty keeps stdout only
};

/// Parses the flat key-value text.  Unknown sections or keys, duplicate
/// keys, malformed values, and mixed q / explicit stepped terms all raise
/// ConfigError; domain violations (negative rates and the like) surface
/// later from the consuming types.
RunConfig parse_config(const std::string& text);

/// Reads and parses a configuration file; ConfigError on I/O failure.
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(dump_config(c)) reproduces c exactly
/// (doubles are printed with round-trip precision).
std::string dump_config(const RunConfig& cfg);

/// Model block as validated simulation parameters, drift calibrated when
/// requested.
ModelParams model_params(const RunConfig& cfg);

/// Contract block with the stepped terms resolved.
ContractTerms contract_terms(const RunConfig& cfg);

}  // namespace swapgame
