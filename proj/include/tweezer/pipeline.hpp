#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tweezer/fit.hpp"
#include "tweezer/io/config.hpp"
#include "tweezer/kernel.hpp"
#include "tweezer/morse.hpp"
#include "tweezer/optimizer.hpp"
#include "tweezer/survival.hpp"

namespace tweezer {

/// Runs the analysis stages against one resolved configuration. Each stage
/// computes the prerequisites it needs (without writing their files), writes
/// its own CSV/JSON/SVG outputs into the output directory and records its
/// wall time and check values for the manifest.
class Pipeline {
 public:
  Pipeline(io::RunConfig config, std::ostream& log);

  void morse();
  void kernel();
  void spectrum();
  void fit();
  void optimize();
  void survival();
  void adiabaticity();
  /// morse, kernel, spectrum, fit, optimize, survival, adiabaticity in order.
  void run_all();

  /// manifest.json: config hash, versions, per-stage timings, checks and the
  /// completed stages. `failure` names the error that stopped the run.
  void write_manifest(const std::optional<std::string>& failure = std::nullopt) const;

  const nlohmann::json& checks() const noexcept { return checks_; }
  const io::RunConfig& config() const noexcept { return config_; }

 private:
  template <class F>
  void stage(const std::string& name, F&& body);

  const MorseModel& model();
  const KernelSamples& samples();
  const DampedOscFit& fitted();
  const Trajectory& trajectory();

  std::filesystem::path out(const std::string& file) const;
  void plot(const std::string& file, const std::string& title, const std::string& x_label,
            const std::string& y_label, std::span<const double> x,
            const std::vector<std::pair<std::string, std::vector<double>>>& series) const;

  io::RunConfig config_;
  std::ostream& log_;
  std::optional<MorseModel> model_;
  std::optional<KernelSamples> samples_;
  std::optional<DampedOscFit> fit_;
  std::optional<Trajectory> trajectory_;
  nlohmann::json stages_ = nlohmann::json::array();
  nlohmann::json checks_ = nlohmann::json::object();
  bool flagged_ = false;
};

}  // namespace tweezer
