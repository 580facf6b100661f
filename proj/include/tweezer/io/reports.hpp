#pragma once

#include <filesystem>

#include <json.hpp>

#include "tweezer/fit.hpp"
#include "tweezer/optimizer.hpp"

namespace tweezer::io {

nlohmann::json to_json(Complex z);
nlohmann::json to_json(const DampedOscTerm& term);
nlohmann::json to_json(const PoleClassification& c);

/// Six parameters per term, residual and window, with the producing config.
nlohmann::json fit_report(const DampedOscFit& fit, const nlohmann::json& config);

/// Poles, residues, multiplier, horizon, fluence and pole classification.
nlohmann::json trajectory_record(const Trajectory& traj);

/// Pretty-printed with a trailing newline; throws ConfigError on I/O failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace tweezer::io
