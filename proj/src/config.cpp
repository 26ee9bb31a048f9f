#include "swapgame/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace swapgame {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + v +
                      "'");
  }
  if (used != v.size()) {
    throw ConfigError("config: trailing junk after number in '" + key + " = " +
                      v + "'");
  }
  return value;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + v +
                      "'");
  }
  if (used != v.size()) {
    throw ConfigError("config: trailing junk after integer in '" + key +
                      " = " + v + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config: key '" + key + "' needs true or false, got '" +
                    v + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: unterminated section header at line " +
                          std::to_string(lineno));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(lineno));
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kv.emplace(key, value).second) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
  }

  RunConfig cfg;
  auto take = [&kv](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return std::pair<bool, std::string>{false, ""};
    std::pair<bool, std::string> out{true, it->second};
    kv.erase(it);
    return out;
  };
  auto dbl = [&take](const std::string& key, double& slot) {
    if (auto [hit, v] = take(key); hit) slot = parse_double(key, v);
  };
  auto integer = [&take](const std::string& key, int& slot) {
    if (auto [hit, v] = take(key); hit)
      slot = static_cast<int>(parse_int(key, v));
  };
  auto boolean = [&take](const std::string& key, bool& slot) {
    if (auto [hit, v] = take(key); hit) slot = parse_bool(key, v);
  };

  dbl("model.r", cfg.r);
  dbl("model.nu", cfg.nu);
  dbl("model.lambda", cfg.lambda);
  dbl("model.eta", cfg.eta);
  if (auto [hit, v] = take("model.mu"); hit) {
    if (v == "calibrate") {
      cfg.calibrate = true;
    } else {
      cfg.mu = parse_double("model.mu", v);
      cfg.calibrate = false;
    }
  }

  dbl("contract.p", cfg.p);
  dbl("contract.alpha", cfg.alpha);
  dbl("contract.gamma_b", cfg.gamma_b);
  dbl("contract.gamma_s", cfg.gamma_s);
  dbl("contract.x", cfg.x);
  const auto q_kv = take("contract.q");
  const auto ph_kv = take("contract.p_hat");
  const auto ah_kv = take("contract.alpha_hat");
  if (q_kv.first && (ph_kv.first || ah_kv.first)) {
    throw ConfigError(
        "config: give either contract.q or explicit p_hat/alpha_hat, not "
        "both");
  }
  if (ph_kv.first != ah_kv.first) {
    throw ConfigError(
        "config: explicit stepped terms need both p_hat and alpha_hat");
  }
  if (q_kv.first) {
    cfg.has_q = true;
    cfg.q = parse_double("contract.q", q_kv.second);
  } else if (ph_kv.first) {
    cfg.has_q = false;
    cfg.p_hat = parse_double("contract.p_hat", ph_kv.second);
    cfg.alpha_hat = parse_double("contract.alpha_hat", ah_kv.second);
  }

  dbl("numerics.eps", cfg.eps);

  dbl("grid.x_min", cfg.x_min);
  dbl("grid.x_max", cfg.x_max);
  integer("grid.x_points", cfg.x_points);
  dbl("grid.p_min", cfg.p_min);
  dbl("grid.p_max", cfg.p_max);
  integer("grid.p_points", cfg.p_points);
  dbl("grid.gamma_min", cfg.gamma_min);
  dbl("grid.gamma_max", cfg.gamma_max);
  integer("grid.gamma_points", cfg.gamma_points);
  if (auto [hit, v] = take("grid.sweep"); hit) {
    if (v != "gamma_s" && v != "gamma_b") {
      throw ConfigError("config: grid.sweep must be gamma_s or gamma_b");
    }
    cfg.sweep = v;
  }

  if (auto [hit, v] = take("mc.n_paths"); hit) {
    const long long n = parse_int("mc.n_paths", v);
    if (n < 1) throw ConfigError("config: mc.n_paths must be positive");
    cfg.mc.n_paths = static_cast<std::size_t>(n);
  }
  if (auto [hit, v] = take("mc.master_seed"); hit) {
    cfg.mc.master_seed =
        static_cast<std::uint64_t>(parse_int("mc.master_seed", v));
  }
  dbl("mc.horizon", cfg.mc.horizon);
  dbl("mc.grid_dt", cfg.mc.grid_dt);
  boolean("mc.antithetic", cfg.mc.antithetic);
  boolean("mc.bridge", cfg.mc.bridge);

  integer("output.precision", cfg.precision);
  if (auto [hit, v] = take("output.out"); hit) cfg.out = v;

  if (!kv.empty()) {
    throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
  }
  if (cfg.precision < 1 || cfg.precision > 17) {
    throw ConfigError("config: output.precision must be in [1, 17]");
  }
  if (cfg.x_points < 1 || cfg.p_points < 1 || cfg.gamma_points < 1) {
    throw ConfigError("config: grid point counts must be positive");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[model]\n";
  o << "r = " << fmt_double(cfg.r) << "\n";
  o << "nu = " << fmt_double(cfg.nu) << "\n";
  o << "lambda = " << fmt_double(cfg.lambda) << "\n";
  o << "eta = " << fmt_double(cfg.eta) << "\n";
  o << "mu = " << (cfg.calibrate ? std::string("calibrate") : fmt_double(cfg.mu))
    << "\n";
  o << "\n[contract]\n";
  o << "p = " << fmt_double(cfg.p) << "\n";
  o << "alpha = " << fmt_double(cfg.alpha) << "\n";
  if (cfg.has_q) {
    o << "q = " << fmt_double(cfg.q) << "\n";
  } else {
    o << "p_hat = " << fmt_double(cfg.p_hat) << "\n";
    o << "alpha_hat = " << fmt_double(cfg.alpha_hat) << "\n";
  }
  o << "gamma_b = " << fmt_double(cfg.gamma_b) << "\n";
  o << "gamma_s = " << fmt_double(cfg.gamma_s) << "\n";
  o << "x = " << fmt_double(cfg.x) << "\n";
  o << "\n[numerics]\n";
  o << "eps = " << fmt_double(cfg.eps) << "\n";
  o << "\n[grid]\n";
  o << "x_min = " << fmt_double(cfg.x_min) << "\n";
  o << "x_max = " << fmt_double(cfg.x_max) << "\n";
  o << "x_points = " << cfg.x_points << "\n";
  o << "p_min = " << fmt_double(cfg.p_min) << "\n";
  o << "p_max = " << fmt_double(cfg.p_max) << "\n";
  o << "p_points = " << cfg.p_points << "\n";
  o << "gamma_min = " << fmt_double(cfg.gamma_min) << "\n";
  o << "gamma_max = " << fmt_double(cfg.gamma_max) << "\n";
  o << "gamma_points = " << cfg.gamma_points << "\n";
  o << "sweep = " << cfg.sweep << "\n";
  o << "\n[mc]\n";
  o << "n_paths = " << cfg.mc.n_paths << "\n";
  o << "master_seed = " << cfg.mc.master_seed << "\n";
  o << "horizon = " << fmt_double(cfg.mc.horizon) << "\n";
  o << "grid_dt = " << fmt_double(cfg.mc.grid_dt) << "\n";
  o << "antithetic = " << (cfg.mc.antithetic ? "true" : "false") << "\n";
  o << "bridge = " << (cfg.mc.bridge ? "true" : "false") << "\n";
  o << "\n[output]\n";
  o << "precision = " << cfg.precision << "\n";
  if (!cfg.out.empty()) o << "out = " << cfg.out << "\n";
  return o.str();
}

ModelParams model_params(const RunConfig& cfg) {
  ModelParams m;
  m.r = cfg.r;
  m.nu = cfg.nu;
  m.lambda = cfg.lambda;
  m.eta = cfg.eta;
  m.mu = cfg.calibrate ? calibrate_drift(cfg.r, cfg.nu, cfg.lambda, cfg.eta)
                       : cfg.mu;
  m.validate();
  return m;
}

ContractTerms contract_terms(const RunConfig& cfg) {
  ContractTerms t;
  t.p = cfg.p;
  t.alpha = cfg.alpha;
  t.gamma_b = cfg.gamma_b;
  t.gamma_s = cfg.gamma_s;
  if (cfg.has_q) {
    t.p_hat = cfg.q * cfg.p;
    t.alpha_hat = cfg.q * cfg.alpha;
  } else {
    t.p_hat = cfg.p_hat;
    t.alpha_hat = cfg.alpha_hat;
  }
  return t;
}

}  // namespace swapgame
