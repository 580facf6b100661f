#include "tweezer/io/reports.hpp"

#include <fstream>

#include "tweezer/errors.hpp"

namespace tweezer::io {

using nlohmann::json;

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const DampedOscTerm& t) {
  return {{"a1", t.a1}, {"b1", t.b1}, {"c1", t.c1}, {"d1", t.d1}, {"w1", t.w1}, {"w2", t.w2}};
}

json to_json(const PoleClassification& c) {
  return {{"real_positive", c.real_positive},
          {"real_negative", c.real_negative},
          {"real_zero", c.real_zero},
          {"complex_rhp_pairs", c.complex_rhp_pairs},
          {"complex_lhp_pairs", c.complex_lhp_pairs},
          {"unpaired_complex", c.unpaired_complex},
          {"verdict", c.verdict}};
}

json fit_report(const DampedOscFit& fit, const json& config) {
  json terms = json::array();
  for (const auto& t : fit.terms) terms.push_back(to_json(t));
  return {{"terms", terms},
          {"residual_norm", fit.residual_norm},
          {"window", {fit.t_min, fit.t_max}},
          {"iterations", fit.iterations},
          {"config", config}};
}

json trajectory_record(const Trajectory& traj) {
  json poles = json::array(), residues = json::array();
  for (std::size_t i = 0; i < traj.poles.size(); ++i) {
    poles.push_back(to_json(traj.poles[i]));
    residues.push_back(to_json(traj.residues[i]));
  }
  return {{"lambda", traj.lambda},
          {"p_dot0", traj.p_dot0},
          {"horizon", traj.horizon},
          {"poles", poles},
          {"residues", residues},
          {"fluence", fluence(traj)},
          {"classification", to_json(classify_poles(traj))}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace tweezer::io
