#include "swapgame/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "swapgame/config.hpp"
#include "swapgame/equilibrium.hpp"
#include "swapgame/mc.hpp"
#include "swapgame/scale.hpp"
#include "swapgame/valuation.hpp"

namespace swapgame {

namespace {

const char* kUsage =
    "usage: swapgame <command> --config <path> [--seed N] [--out <path>]\n"
    "commands: calibrate thresholds curve premium sweep-p sweep-gamma "
    "verify\n";

std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string fmt_level(const UpperLevel& level, int precision) {
  return level.is_unbounded() ? "inf" : fmt(level.value(), precision);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    v.push_back(lo);
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v.push_back(lo + step * i);
  v.back() = hi;
  return v;
}

void write_atomic(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << payload;
    f.flush();
    if (!f) throw ConfigError("output: cannot write '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw ConfigError("output: cannot rename '" + tmp + "' to '" + path +
                      "': " + ec.message());
  }
}

std::string cmd_calibrate(const RunConfig& cfg) {
  const ModelParams m = model_params(cfg);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "mu = %.4f\n", m.mu);
  return buf;
}

std::string cmd_thresholds(const RunConfig& cfg) {
  const ScaleCoefficients sc = build_coefficients(model_params(cfg));
  const Valuation val(sc, contract_terms(cfg), cfg.eps);
  const EquilibriumSolution& sol = val.solution();
  std::ostringstream o;
  const int prec = cfg.precision;
  o << "A_star = " << fmt(sol.a_star, prec) << "\n";
  o << "B_star = " << fmt_level(sol.b_star, prec) << "\n";
  o << "case = " << sol.case_id << "\n";
  o << "nash = " << (sol.nash ? "true" : "false") << "\n";
  o << "Psi_hat = " << fmt(sol.fit_psi_hat, prec) << "\n";
  o << "dPsi_hat_db = " << fmt(sol.fit_dpsi_hat_db, prec) << "\n";
  return o.str();
}

std::string cmd_curve(const RunConfig& cfg) {
  const ModelParams m = model_params(cfg);
  const ScaleCoefficients sc = build_coefficients(m);
  const std::vector<double> grid = linspace(cfg.x_min, cfg.x_max, cfg.x_points);
  const int prec = cfg.precision;
  std::ostringstream o;
  o << "x,V,region\n";
  if (cfg.has_q && cfg.q == 1.0) {
    // Exercising changes nothing, so the game is vacuous and the contract
    // is a plain swap worth its running leg difference.
    for (double x : grid) {
      const double V = x <= 0.0
                           ? cfg.alpha
                           : (cfg.p / m.r + cfg.alpha) * zeta(sc, x) -
                                 cfg.p / m.r;
      const char* region = x <= 0.0 ? "default" : "continuation";
      o << fmt(x, prec) << "," << fmt(V, prec) << "," << region << "\n";
    }
    return o.str();
  }
  const Valuation val(sc, contract_terms(cfg), cfg.eps);
  const ValueCurve curve = val.curve(grid);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    o << fmt(curve.grid[i], prec) << "," << fmt(curve.values[i], prec) << ","
      << to_string(curve.regions[i]) << "\n";
  }
  return o.str();
}

std::string cmd_premium(const RunConfig& cfg) {
  if (!cfg.has_q) {
    throw ConfigError(
        "premium: the equilibrium premium search needs the proportional "
        "factor contract.q");
  }
  const ScaleCoefficients sc = build_coefficients(model_params(cfg));
  const double p_star =
      equilibrium_premium(sc, contract_terms(cfg), cfg.q, cfg.x, cfg.eps);
  return "p_star = " + fmt(p_star, cfg.precision) + "\n";
}

std::string cmd_sweep_p(const RunConfig& cfg) {
  const ScaleCoefficients sc = build_coefficients(model_params(cfg));
  const int prec = cfg.precision;
  std::ostringstream o;
  o << "p,A_star,B_star,case,V\n";
  for (double p : linspace(cfg.p_min, cfg.p_max, cfg.p_points)) {
    RunConfig point = cfg;
    point.p = p;
    const Valuation val(sc, contract_terms(point), cfg.eps);
    const EquilibriumSolution& sol = val.solution();
    o << fmt(p, prec) << "," << fmt(sol.a_star, prec) << ","
      << fmt_level(sol.b_star, prec) << "," << sol.case_id << ","
      << fmt(val.value_V(cfg.x), prec) << "\n";
  }
  return o.str();
}

std::string cmd_sweep_gamma(const RunConfig& cfg) {
  if (!cfg.has_q) {
    throw ConfigError(
        "sweep-gamma: the equilibrium premium search needs the proportional "
        "factor contract.q");
  }
  const ScaleCoefficients sc = build_coefficients(model_params(cfg));
  const int prec = cfg.precision;
  std::ostringstream o;
  o << "gamma,p_star\n";
  for (double g : linspace(cfg.gamma_min, cfg.gamma_max, cfg.gamma_points)) {
    ContractTerms t = contract_terms(cfg);
    (cfg.sweep == "gamma_s" ? t.gamma_s : t.gamma_b) = g;
    const double p_star = equilibrium_premium(sc, t, cfg.q, cfg.x, cfg.eps);
    o << fmt(g, prec) << "," << fmt(p_star, prec) << "\n";
  }
  return o.str();
}

struct VerifyRow {
  std::string check;
  double analytic;
  McEstimate mc;
  bool pass;
};

std::string cmd_verify(const RunConfig& cfg, std::string& err,
                       bool& all_pass) {
  const ModelParams m = model_params(cfg);
  const ScaleCoefficients sc = build_coefficients(m);
  if (!(cfg.x > 0.0)) {
    throw ConfigError("verify: contract.x must be positive");
  }
  // Horizon censoring pushes every discounted estimate down by at most the
  // truncation bound, so it widens the acceptance band alongside the
  // statistical error.
  const double slack = truncation_bound(cfg.mc, m.r);
  auto row = [&](const std::string& check, double analytic,
                 const McEstimate& mc) {
    return VerifyRow{check, analytic, mc,
                     std::fabs(analytic - mc.mean) <=
                         3.0 * mc.std_err + slack};
  };

  std::vector<VerifyRow> rows;
  rows.push_back(row("zeta", zeta(sc, cfg.x), estimate_zeta(m, cfg.x, cfg.mc)));

  const double a = 0.5 * cfg.x;
  const double b = 1.5 * cfg.x;
  const ExitIdentities id = exit_identities(sc, cfg.x, a, b);
  const ExitTripleEstimate triple =
      estimate_exit_triple(m, cfg.x, a, b, cfg.mc);
  rows.push_back(row("exit_up", id.up, triple.up));
  rows.push_back(row("exit_down", id.down, triple.down));
  rows.push_back(row("exit_default", id.jump_default, triple.jump_default));

  try {
    const Valuation val(sc, contract_terms(cfg), cfg.eps);
    const EquilibriumSolution& sol = val.solution();
    if (sol.a_star > 0.0 && cfg.x > sol.a_star &&
        (sol.b_star.is_unbounded() || cfg.x < sol.b_star.value())) {
      const McEstimate game = estimate_game_value(
          m, val.kernel().terms(), cfg.x, sol.a_star, sol.b_star, cfg.mc);
      rows.push_back(row("game_value", val.value_v(cfg.x), game));
    } else {
      err += "verify: state x outside the open band; game_value skipped\n";
    }
  } catch (const std::invalid_argument& e) {
    err += std::string("verify: no exercise game for these terms (") +
           e.what() + "); game_value skipped\n";
  }

  const int prec = cfg.precision;
  std::ostringstream o;
  o << "check,analytic,mc_mean,mc_stderr,pass\n";
  all_pass = true;
  for (const VerifyRow& r : rows) {
    all_pass = all_pass && r.pass;
    o << r.check << "," << fmt(r.analytic, prec) << "," << fmt(r.mc.mean, prec)
      << "," << fmt(r.mc.std_err, prec) << "," << (r.pass ? "true" : "false")
      << "\n";
  }
  return o.str();
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  if (args.empty()) {
    res.err = kUsage;
    res.exit_code = 2;
    return res;
  }
  const std::string command = args[0];
  const bool known = command == "calibrate" || command == "thresholds" ||
                     command == "curve" || command == "premium" ||
                     command == "sweep-p" || command == "sweep-gamma" ||
                     command == "verify";
  if (!known) {
    res.err = "unknown command '" + command + "'\n" + kUsage;
    res.exit_code = 2;
    return res;
  }

  std::string config_path;
  std::string out_override;
  bool has_seed = false;
  std::uint64_t seed = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    const bool has_value = i + 1 < args.size();
    if (a == "--config" && has_value) {
      config_path = args[++i];
    } else if (a == "--out" && has_value) {
      out_override = args[++i];
    } else if (a == "--seed" && has_value) {
      try {
        std::size_t used = 0;
        seed = std::stoull(args[i + 1], &used);
        if (used != args[i + 1].size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        res.err = "--seed needs a nonnegative integer\n";
        res.exit_code = 2;
        return res;
      }
      has_seed = true;
      ++i;
    } else {
      res.err = "unexpected argument '" + a + "'\n" + kUsage;
      res.exit_code = 2;
      return res;
    }
  }
  if (config_path.empty()) {
    res.err = std::string("missing --config\n") + kUsage;
    res.exit_code = 2;
    return res;
  }

  try {
    RunConfig cfg = load_config(config_path);
    if (has_seed) cfg.mc.master_seed = seed;
    if (!out_override.empty()) cfg.out = out_override;

    bool verify_pass = true;
    if (command == "calibrate") {
      res.out = cmd_calibrate(cfg);
    } else if (command == "thresholds") {
      res.out = cmd_thresholds(cfg);
    } else if (command == "curve") {
      res.out = cmd_curve(cfg);
    } else if (command == "premium") {
      res.out = cmd_premium(cfg);
    } else if (command == "sweep-p") {
      res.out = cmd_sweep_p(cfg);
    } else if (command == "sweep-gamma") {
      res.out = cmd_sweep_gamma(cfg);
    } else {
      res.out = cmd_verify(cfg, res.err, verify_pass);
    }
    if (!cfg.out.empty()) write_atomic(cfg.out, res.out);
    if (!verify_pass) {
      res.err += "verify: at least one check failed\n";
      res.exit_code = 4;
    }
  } catch (const NonConvergence& e) {
    res.err += std::string("solver did not converge: ") + e.what() + "\n";
    res.exit_code = 3;
  } catch (const std::invalid_argument& e) {
    res.err += std::string(e.what()) + "\n";
    res.exit_code = 2;
  } catch (const std::domain_error& e) {
    res.err += std::string(e.what()) + "\n";
    res.exit_code = 2;
  }
  return res;
}

}  // namespace swapgame
