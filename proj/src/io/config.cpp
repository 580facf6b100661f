#include "tweezer/io/config.hpp"

#include <fstream>
#include <set>

#include "tweezer/errors.hpp"

namespace tweezer::io {

using nlohmann::json;

json default_config_json() {
  return json::parse(R"({
    "morse": {"D": 0.5, "a": 1.0, "m": 1.0, "kappa_min": 0.0, "kappa_max": 6.0, "kappa_points": 241},
    "kernel": {"t_max": 80.0, "n": 1600, "quad_tol": 1e-10, "kappa_max": 15.0,
               "omega_max": 6.0, "omega_points": 961, "fourier_window": 200.0,
               "fourier_step": 0.05, "fourier_omegas": [0.5, 1.0, 2.0, 4.0]},
    "fit": {"t_min": 0.0, "t_max": 80.0, "terms": 1, "init": null},
    "optimize": {"trajectory": "optimal", "lambda": -0.01, "p_dot0": 1.0, "horizon": null,
                 "fluence_target": 7.03219, "horizon_search_max": 60.0, "samples": 401,
                 "lambda_sweep": null},
    "survival": {"kappa_max": 15.0, "omega_quad_tol": 1e-10, "time_points": 101,
                 "mode_table": null, "superposition": false, "k0": 0, "oracle": false,
                 "oracle_delta_kappa": 0.025, "oracle_kappa_max": 6.0,
                 "adiabaticity": {"margin": 0.1, "kappa_max": 3.0, "kappa_points": 61,
                                  "tau_points": 41}},
    "output": {"directory": "out", "svg": false}
  })");
}

namespace {

// Keys whose default is null and which accept a structured value.
const std::set<std::string> kOptionalKeys = {"fit.init", "optimize.horizon",
                                             "optimize.lambda_sweep", "survival.mode_table"};

void merge(json& base, const json& user, const std::string& prefix) {
  if (!user.is_object()) throw ConfigError("'" + prefix + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown configuration key '" + key + "'");
    json& slot = base[it.key()];
    if (kOptionalKeys.count(key)) {
      slot = *it;
    } else if (slot.is_object()) {
      merge(slot, *it, key);
    } else if (slot.is_number() != it->is_number() || slot.is_boolean() != it->is_boolean() ||
               slot.is_string() != it->is_string() || slot.is_array() != it->is_array()) {
      throw ConfigError("'" + key + "' has type " + std::string(it->type_name()) + ", expected " +
                        slot.type_name());
    } else {
      slot = *it;
    }
  }
}

template <class T>
T get(const json& j, const char* section, const char* key) {
  try {
    return j.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("'") + section + "." + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const char* section, const char* key) {
  const json& v = j.at(section).at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("'") + section + "." + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

DampedOscTerm parse_term(const json& j) {
  static const std::set<std::string> keys = {"a1", "b1", "c1", "d1", "w1", "w2"};
  if (!j.is_object()) throw ConfigError("'fit.init' entries must be objects");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw ConfigError("unknown key 'fit.init." + it.key() + "'");
  DampedOscTerm t;
  auto read = [&](const char* k, double& dst) {
    if (!j.contains(k)) throw ConfigError(std::string("'fit.init' entry lacks '") + k + "'");
    if (!j.at(k).is_number()) throw ConfigError(std::string("'fit.init.") + k + "' must be a number");
    dst = j.at(k).get<double>();
  };
  read("a1", t.a1);
  read("b1", t.b1);
  read("c1", t.c1);
  read("d1", t.d1);
  read("w1", t.w1);
  read("w2", t.w2);
  return t;
}

}  // namespace

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form dotted.key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &config;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key segment");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunConfig resolve_config(const json& user) {
  json j = default_config_json();
  merge(j, user.is_null() ? json::object() : user, "");
  RunConfig c;
  c.source = j;

  auto& mo = c.morse;
  mo.D = get<double>(j, "morse", "D");
  mo.a = get<double>(j, "morse", "a");
  mo.m = get<double>(j, "morse", "m");
  mo.kappa_min = get<double>(j, "morse", "kappa_min");
  mo.kappa_max = get<double>(j, "morse", "kappa_max");
  mo.kappa_points = get_count(j, "morse", "kappa_points");
  require(mo.D > 0 && mo.a > 0 && mo.m > 0, "morse.D, morse.a and morse.m must be positive");
  require(mo.kappa_min >= 0 && mo.kappa_max >= mo.kappa_min, "morse kappa range must satisfy 0 <= kappa_min <= kappa_max");
  require(mo.kappa_points >= 1, "morse.kappa_points must be at least 1");

  auto& ke = c.kernel;
  ke.t_max = get<double>(j, "kernel", "t_max");
  ke.n = get_count(j, "kernel", "n");
  ke.quad_tol = get<double>(j, "kernel", "quad_tol");
  ke.kappa_max = get<double>(j, "kernel", "kappa_max");
  ke.omega_max = get<double>(j, "kernel", "omega_max");
  ke.omega_points = get_count(j, "kernel", "omega_points");
  ke.fourier_window = get<double>(j, "kernel", "fourier_window");
  ke.fourier_step = get<double>(j, "kernel", "fourier_step");
  ke.fourier_omegas = get<std::vector<double>>(j, "kernel", "fourier_omegas");
  require(ke.t_max > 0, "kernel.t_max must be positive");
  require(ke.n >= 16, "kernel.n must be at least 16");
  require(ke.quad_tol > 0, "kernel.quad_tol must be positive");
  require(ke.kappa_max > 0, "kernel.kappa_max must be positive");
  require(ke.omega_max > 0 && ke.omega_points >= 2, "kernel.omega_max > 0 and kernel.omega_points >= 2 required");
  require(ke.fourier_window > 0 && ke.fourier_step > 0 && ke.fourier_step < ke.fourier_window,
          "kernel.fourier_step must lie in (0, kernel.fourier_window)");

  auto& fi = c.fit;
  fi.t_min = get<double>(j, "fit", "t_min");
  fi.t_max = get<double>(j, "fit", "t_max");
  fi.terms = get_count(j, "fit", "terms");
  require(fi.t_max > fi.t_min && fi.t_min >= 0, "fit window must satisfy 0 <= t_min < t_max");
  require(fi.t_max <= ke.t_max, "fit.t_max must not exceed kernel.t_max");
  require(fi.terms >= 1, "fit.terms must be at least 1");
  if (const json& init = j["fit"]["init"]; !init.is_null()) {
    const json list = init.is_array() ? init : json::array({init});
    for (const auto& term : list) fi.init.push_back(parse_term(term));
    require(fi.init.size() == fi.terms, "fit.init must list fit.terms entries");
  }

  auto& op = c.optimize;
  op.trajectory = get<std::string>(j, "optimize", "trajectory");
  op.lambda = get<double>(j, "optimize", "lambda");
  op.p_dot0 = get<double>(j, "optimize", "p_dot0");
  op.fluence_target = get<double>(j, "optimize", "fluence_target");
  op.horizon_search_max = get<double>(j, "optimize", "horizon_search_max");
  op.samples = get_count(j, "optimize", "samples");
  require(op.trajectory == "optimal" || op.trajectory == "zero",
          "optimize.trajectory must be \"optimal\" or \"zero\"");
  if (const json& h = j["optimize"]["horizon"]; !h.is_null()) {
    require(h.is_number() && h.get<double>() > 0, "optimize.horizon must be a positive number or null");
    op.horizon = h.get<double>();
  }
  require(op.fluence_target > 0 && op.horizon_search_max > 0,
          "optimize.fluence_target and optimize.horizon_search_max must be positive");
  require(op.samples >= 2, "optimize.samples must be at least 2");
  require(op.trajectory == "optimal" || op.horizon.has_value(),
          "optimize.trajectory = \"zero\" needs an explicit optimize.horizon");
  if (const json& s = j["optimize"]["lambda_sweep"]; !s.is_null()) {
    json sweep = {{"lo", -1.0}, {"hi", -1e-4}, {"n", 9}};
    merge(sweep, s, "optimize.lambda_sweep");
    SweepSection sw;
    sw.lo = sweep["lo"].get<double>();
    sw.hi = sweep["hi"].get<double>();
    require(sweep["n"].is_number_integer() && sweep["n"].get<long long>() >= 1,
            "optimize.lambda_sweep.n must be a positive integer");
    sw.n = sweep["n"].get<std::size_t>();
    require(sw.lo != 0 && sw.hi != 0 && (sw.lo < 0) == (sw.hi < 0),
            "optimize.lambda_sweep bounds must be non-zero with the same sign");
    op.lambda_sweep = sw;
  }

  auto& su = c.survival;
  su.kappa_max = get<double>(j, "survival", "kappa_max");
  su.omega_quad_tol = get<double>(j, "survival", "omega_quad_tol");
  su.time_points = get_count(j, "survival", "time_points");
  su.superposition = get<bool>(j, "survival", "superposition");
  su.k0 = get_count(j, "survival", "k0");
  su.oracle = get<bool>(j, "survival", "oracle");
  su.oracle_delta_kappa = get<double>(j, "survival", "oracle_delta_kappa");
  su.oracle_kappa_max = get<double>(j, "survival", "oracle_kappa_max");
  require(su.kappa_max > 0 && su.omega_quad_tol > 0, "survival.kappa_max and survival.omega_quad_tol must be positive");
  require(su.time_points >= 2, "survival.time_points must be at least 2");
  require(su.oracle_delta_kappa > 0 && su.oracle_kappa_max > su.oracle_delta_kappa,
          "survival oracle grid needs 0 < oracle_delta_kappa < oracle_kappa_max");
  if (const json& mt = j["survival"]["mode_table"]; !mt.is_null()) {
    require(mt.is_string(), "survival.mode_table must be a path or null");
    su.mode_table = mt.get<std::string>();
    require(std::filesystem::exists(*su.mode_table),
            "survival.mode_table '" + su.mode_table->string() + "' does not exist");
  }
  require(!su.superposition || su.mode_table.has_value(),
          "survival.superposition requires survival.mode_table");
  const json& ad = j["survival"]["adiabaticity"];
  su.adiabaticity.margin = ad["margin"].get<double>();
  su.adiabaticity.kappa_max = ad["kappa_max"].get<double>();
  require(ad["kappa_points"].is_number_integer() && ad["tau_points"].is_number_integer(),
          "survival.adiabaticity point counts must be integers");
  su.adiabaticity.kappa_points = ad["kappa_points"].get<std::size_t>();
  su.adiabaticity.tau_points = ad["tau_points"].get<std::size_t>();
  require(su.adiabaticity.margin > 0 && su.adiabaticity.kappa_max > 0 &&
              su.adiabaticity.kappa_points >= 1 && su.adiabaticity.tau_points >= 1,
          "survival.adiabaticity settings must be positive");

  c.output.directory = get<std::string>(j, "output", "directory");
  c.output.svg = get<bool>(j, "output", "svg");
  return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides) {
  json user = json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config " + path->string());
    try {
      user = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
      throw ConfigError(path->string() + ": " + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(user, o);
  return resolve_config(user);
}

std::uint64_t config_hash(const RunConfig& config) {
  json physics = config.source;
  physics.erase("output");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : physics.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace tweezer::io
