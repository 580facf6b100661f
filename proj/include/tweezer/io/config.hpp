#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweezer/fit.hpp"
#include "tweezer/survival.hpp"

namespace tweezer::io {

struct MorseSection {
  double D = 0.5, a = 1.0, m = 1.0;
  double kappa_min = 0.0, kappa_max = 6.0;
  std::size_t kappa_points = 241;
};

struct KernelSection {
  double t_max = 80.0;
  std::size_t n = 1600;
  double quad_tol = 1e-10;
  double kappa_max = 15.0;
  double omega_max = 6.0;
  std::size_t omega_points = 961;
  double fourier_window = 200.0;
  double fourier_step = 0.05;
  std::vector<double> fourier_omegas{0.5, 1.0, 2.0, 4.0};
};

struct FitSection {
  double t_min = 0.0, t_max = 80.0;
  std::size_t terms = 1;
  std::vector<DampedOscTerm> init;  ///< empty: heuristic start
};

struct SweepSection {
  double lo = -1.0, hi = -1e-4;
  std::size_t n = 9;
};

struct OptimizeSection {
  std::string trajectory = "optimal";  ///< "optimal" or "zero"
  double lambda = -0.01;
  double p_dot0 = 1.0;
  std::optional<double> horizon;  ///< empty: solve E(T) = fluence_target
  double fluence_target = 7.03219;
  double horizon_search_max = 60.0;
  std::size_t samples = 401;
  std::optional<SweepSection> lambda_sweep;
};

struct AdiabaticitySection {
  double margin = 0.1;
  double kappa_max = 3.0;
  std::size_t kappa_points = 61;
  std::size_t tau_points = 41;
};

struct SurvivalSection {
  double kappa_max = 15.0;
  double omega_quad_tol = 1e-10;
  std::size_t time_points = 101;
  std::optional<std::filesystem::path> mode_table;
  bool superposition = false;
  std::size_t k0 = 0;
  bool oracle = false;
  double oracle_delta_kappa = 0.025;
  double oracle_kappa_max = 6.0;
  AdiabaticitySection adiabaticity;
};

struct OutputSection {
  std::filesystem::path directory = "out";
  bool svg = false;
};

struct RunConfig {
  MorseSection morse;
  KernelSection kernel;
  FitSection fit;
  OptimizeSection optimize;
  SurvivalSection survival;
  OutputSection output;
  nlohmann::json source;  ///< fully resolved configuration, defaults included
};

/// Every recognised key with its default value.
nlohmann::json default_config_json();

/// Applies `dotted.key=value`; value is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Merges `user` over the defaults, rejects unknown keys and type mismatches,
/// checks preconditions and that referenced files exist. Throws ConfigError.
RunConfig resolve_config(const nlohmann::json& user);

/// Reads the JSON file (if given), applies the overrides, resolves.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::string>& overrides);

/// 64-bit FNV-1a of the canonical dump of config.source without the output
/// section, so runs differing only in destination share a hash.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace tweezer::io
