#include "tweezer/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include "tweezer/errors.hpp"
#include "tweezer/io/csv.hpp"
#include "tweezer/io/mode_table.hpp"
#include "tweezer/io/reports.hpp"
#include "tweezer/io/svg.hpp"
#include "tweezer/simd.hpp"

namespace tweezer {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool in_regime(double p) { return p >= -0.05 && p <= 1.05; }

}  // namespace

Pipeline::Pipeline(io::RunConfig config, std::ostream& log) : config_(std::move(config)), log_(log) {}

template <class F>
void Pipeline::stage(const std::string& name, F&& body) {
  std::filesystem::create_directories(config_.output.directory);
  const auto start = std::chrono::steady_clock::now();
  body();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  stages_.push_back({{"stage", name}, {"seconds", elapsed.count()}});
}

std::filesystem::path Pipeline::out(const std::string& file) const {
  return config_.output.directory / file;
}

void Pipeline::plot(const std::string& file, const std::string& title, const std::string& x_label,
                    const std::string& y_label, std::span<const double> x,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series) const {
  if (!config_.output.svg) return;
  std::vector<io::PlotSeries> s;
  for (const auto& [name, y] : series) s.push_back({name, y});
  io::write_line_plot(out(file), title, x_label, y_label, x, s);
}

const MorseModel& Pipeline::model() {
  if (!model_) model_ = build_model(config_.morse.D, config_.morse.a, config_.morse.m);
  return *model_;
}

const KernelSamples& Pipeline::samples() {
  if (!samples_) {
    KernelOptions ko;
    ko.kappa_max = config_.kernel.kappa_max;
    ko.quad_tol = config_.kernel.quad_tol;
    samples_ = sample_kernel(model(), config_.kernel.t_max, config_.kernel.n, ko);
  }
  return *samples_;
}

const DampedOscFit& Pipeline::fitted() {
  if (!fit_) {
    const FitOptions fo{config_.fit.t_min, config_.fit.t_max};
    std::vector<DampedOscTerm> init = config_.fit.init;
    if (init.empty()) {
      // extra terms start as slower, weaker copies of the heuristic one
      const DampedOscTerm g = initial_guess(samples());
      for (std::size_t j = 0; j < config_.fit.terms; ++j) {
        DampedOscTerm t = g;
        const double f = 1.0 / static_cast<double>(j + 1);
        t.a1 *= f;
        t.b1 *= f;
        t.d1 *= f;
        t.w1 *= 1.0 + static_cast<double>(j);
        init.push_back(t);
      }
    }
    fit_ = fit_kernel(samples(), init, fo);
  }
  return *fit_;
}

const Trajectory& Pipeline::trajectory() {
  if (!trajectory_) {
    const auto& op = config_.optimize;
    if (op.trajectory == "zero") {
      Trajectory z;
      z.horizon = *op.horizon;
      trajectory_ = z;
    } else {
      Trajectory t = solve_trajectory(fitted(), op.lambda, op.p_dot0, op.horizon_search_max);
      if (op.horizon) {
        t = with_horizon(t, *op.horizon);
      } else {
        const double T = find_fluence_horizon(t, op.fluence_target, op.horizon_search_max);
        t = with_horizon(t, T);
        checks_["fluence_horizon"] = {{"target", op.fluence_target}, {"horizon", T},
                                      {"fluence", fluence(t)}};
      }
      trajectory_ = t;
    }
  }
  return *trajectory_;
}

void Pipeline::morse() {
  stage("morse", [&] {
    const MorseModel& m = model();
    const auto kappas = linspace(config_.morse.kappa_min, config_.morse.kappa_max, config_.morse.kappa_points);
    io::CsvWriter csv(out("a_kappa.csv"), {"kappa[reduced]", "a_kappa[reduced]", "mu_tilde[reduced]",
                                            "omega_k0[reduced]"});
    std::vector<double> a;
    for (double k : kappas) {
      const MatrixElement e = matrix_element(m, k);
      csv.row({k, e.a_kappa, e.mu_tilde.real(), e.omega_k0});
      a.push_back(e.a_kappa);
    }
    plot("a_kappa.svg", "Bound-continuum weight", "kappa", "a_kappa", kappas, {{"a_kappa", a}});
    log_ << std::setprecision(12) << "N = " << m.N << "\nomega0 = " << m.omega0
         << "\nm* = " << m.m_star << '\n';
    checks_["morse"] = {{"N", m.N}, {"omega0", m.omega0}, {"m_star", m.m_star},
                        {"omega0_closed", bound_frequency_closed(m)}};
  });
}

void Pipeline::kernel() {
  stage("kernel", [&] {
    const KernelSamples& s = samples();
    io::CsvWriter csv(out("kernel.csv"), {"t[reduced]", "K[reduced]"});
    for (std::size_t i = 0; i < s.times.size(); ++i) csv.row({s.times[i], s.values[i]});
    plot("kernel.svg", "Memory kernel", "t", "K(t)", s.times, {{"K", s.values}});
    checks_["kernel"] = {{"K0", s.values.front()}, {"samples", s.times.size()}};
  });
}

void Pipeline::spectrum() {
  stage("spectrum", [&] {
    const auto& kc = config_.kernel;
    const LeakageSpectrum spec(model());
    const auto omegas = linspace(-kc.omega_max, kc.omega_max, kc.omega_points);
    io::CsvWriter csv(out("spectrum.csv"), {"omega[reduced]", "G[reduced]"});
    std::vector<double> g;
    for (double w : omegas) {
      g.push_back(spec(w));
      csv.row({w, g.back()});
    }
    plot("spectrum.svg", "Leakage spectrum", "omega", "G(omega)", omegas, {{"G", g}});

    // Fourier consistency: tapered transform of a long kernel record against G
    KernelOptions ko;
    ko.kappa_max = kc.kappa_max;
    ko.quad_tol = kc.quad_tol;
    const auto n = static_cast<std::size_t>(std::llround(kc.fourier_window / kc.fourier_step)) + 1;
    const KernelSamples longrec = sample_kernel(model(), kc.fourier_window, n, ko);
    io::CsvWriter check(out("spectrum_check.csv"),
                        {"omega[reduced]", "G[reduced]", "G_fourier[reduced]", "relative_error"});
    json rows = json::array();
    double worst = 0.0;
    log_ << "Fourier consistency (omega, G, transformed kernel, relative error):\n";
    for (double w : kc.fourier_omegas) {
      const double exact = spec(w);
      const double ft = windowed_fourier(longrec, w);
      const double rel = exact != 0.0 ? std::abs(ft - exact) / std::abs(exact) : std::abs(ft);
      worst = std::max(worst, rel);
      check.row({w, exact, ft, rel});
      rows.push_back({{"omega", w}, {"G", exact}, {"fourier", ft}, {"relative_error", rel}});
      log_ << std::setprecision(6) << "  " << w << ' ' << exact << ' ' << ft << ' ' << rel << '\n';
    }
    checks_["spectrum"] = {{"fourier", rows}, {"max_relative_error", worst}, {"gap", spec.gap()}};
  });
}

void Pipeline::fit() {
  stage("fit", [&] {
    const DampedOscFit& f = fitted();
    const KernelSamples& s = samples();
    io::write_json(out("fit.json"), io::fit_report(f, config_.source));
    io::CsvWriter csv(out("fit_overlay.csv"), {"t[reduced]", "data[reduced]", "model[reduced]"});
    std::vector<double> model_values;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      model_values.push_back(f(s.times[i]));
      csv.row({s.times[i], s.values[i], model_values.back()});
    }
    plot("fit_overlay.svg", "Kernel fit", "t", "K(t)", s.times, {{"data", s.values}, {"model", model_values}});
    const FitOptions fo{config_.fit.t_min, config_.fit.t_max};
    const DampedOscTerm ref = reference_fit_term();
    const double ref_residual = fit_residual(s, std::span(&ref, 1), fo);
    checks_["fit"] = {{"residual_norm", f.residual_norm},
                      {"reference_residual_norm", ref_residual},
                      {"residual_ratio", f.residual_norm / ref_residual},
                      {"G0", laplace_of_fit(f)(Complex{0.0, 0.0}).real()}};
    log_ << std::setprecision(6) << "fit residual " << f.residual_norm << " (reference "
         << ref_residual << ")\n";
  });
}

void Pipeline::optimize() {
  stage("optimize", [&] {
    const auto& op = config_.optimize;
    const Trajectory& t = trajectory();
    json record = io::trajectory_record(t);
    record["trajectory"] = op.trajectory;
    if (!t.empty()) {
      const DampedOscFit& f = fitted();
      const auto grid = linspace(0.0, t.horizon, 41);
      KernelOptions ko;
      ko.kappa_max = config_.kernel.kappa_max;
      const KernelEvaluator true_kernel(model(), t.horizon, ko);
      const double el_fit = el_residual(t, [&](double s) { return f(s); }, grid);
      const double el_true = el_residual(t, [&](double s) { return true_kernel(s); }, grid);
      const LagrangeCheck lc = lagrange_selfcheck(t, f);
      record["el_residual"] = el_fit;
      record["el_residual_true_kernel"] = el_true;
      record["lagrange"] = {{"recovered", lc.recovered}, {"ratio", lc.ratio}, {"literal_ratio", lc.literal_ratio}};
      checks_["optimize"] = {{"el_residual", el_fit}, {"el_residual_true_kernel", el_true},
                             {"lagrange_ratio", lc.ratio}, {"verdict", record["classification"]["verdict"]}};
    }
    record["config"] = config_.source;
    io::write_json(out("trajectory.json"), record);

    const auto times = linspace(0.0, t.horizon, op.samples);
    io::CsvWriter csv(out("trajectory.csv"), {"t[reduced]", "velocity[reduced]", "position[reduced]",
                                               "acceleration[reduced]"});
    std::vector<double> v, x;
    for (double s : times) {
      v.push_back(velocity(t, s));
      x.push_back(position(t, s));
      csv.row({s, v.back(), x.back(), acceleration(t, s)});
    }
    plot("trajectory.svg", "Optimal trap motion", "t", "value", times, {{"velocity", v}, {"position", x}});
    log_ << std::setprecision(8) << "horizon " << t.horizon << ", fluence " << fluence(t) << ", "
         << record["classification"]["verdict"].get<std::string>() << '\n';

    if (op.lambda_sweep && op.trajectory == "optimal") {
      const auto& sw = *op.lambda_sweep;
      json records = json::array();
      io::CsvWriter table(out("lambda_sweep.csv"),
                          {"lambda[reduced]", "verdict", "real_positive", "complex_rhp_pairs",
                           "horizon[reduced]", "fluence[reduced]"});
      for (double lambda : lambda_grid(sw.lo, sw.hi, sw.n)) {
        Trajectory s = solve_trajectory(fitted(), lambda, op.p_dot0, op.horizon_search_max);
        std::optional<double> T = op.horizon;
        if (!T) {
          try {
            T = find_fluence_horizon(s, op.fluence_target, op.horizon_search_max);
          } catch (const DomainError&) {
          }
        }
        s = with_horizon(s, T.value_or(op.horizon_search_max));
        json r = io::trajectory_record(s);
        r["horizon_matched"] = T.has_value();
        const PoleClassification c = classify_poles(s);
        table.row(std::vector<std::string>{io::format_number(lambda), c.verdict,
                                           std::to_string(c.real_positive),
                                           std::to_string(c.complex_rhp_pairs),
                                           T ? io::format_number(*T) : std::string("nan"),
                                           io::format_number(fluence(s))});
        records.push_back(std::move(r));
      }
      io::write_json(out("lambda_sweep.json"), {{"records", records}, {"config", config_.source}});
    }
  });
}

void Pipeline::survival() {
  stage("survival", [&] {
    const auto& sc = config_.survival;
    std::vector<PhononMode> modes;
    if (sc.mode_table) modes = io::read_mode_table(*sc.mode_table);
    if (sc.superposition && sc.k0 >= modes.size())
      throw ConfigError("survival.k0 = " + std::to_string(sc.k0) + " is outside the mode table");
    const Trajectory& traj = trajectory();
    const MorseModel& m = model();
    SurvivalOptions so;
    so.kappa_max = sc.kappa_max;
    so.omega_quad_tol = sc.omega_quad_tol;
    const auto times = linspace(0.0, traj.horizon, sc.time_points);
    std::optional<ContinuumOverlaps> table;
    if (!modes.empty()) table.emplace(m);
    const SurvivalSeries s = survival_series(traj, m, times, modes, so, false, table ? &*table : nullptr);

    std::vector<SurvivalBreakdown> sup;
    if (sc.superposition) {
      const std::vector<Complex> d = table->couplings(modes[sc.k0]);
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        SurvivalBreakdown b;
        b.nonadiabatic = 1.0 - s.p_free[i];
        b.phonon = phonon_leakage(*table, d, modes[sc.k0], t);
        b.cross = -2.0 * (Complex{0.0, 1.0} * cross_amplitude(traj, *table, d, modes[sc.k0], t)).real();
        b.probability = 1.0 - b.nonadiabatic - 0.5 * b.phonon + b.cross;
        sup.push_back(b);
      }
    }

    std::vector<std::string> header{"t[reduced]", "p_free_time", "p_free_spectral", "cross_sum", "p_total"};
    if (sc.superposition)
      for (const char* h : {"p_superposition", "nonadiabatic", "phonon", "interference"}) header.emplace_back(h);
    header.emplace_back("regime_ok");
    io::CsvWriter csv(out("survival.csv"), header);
    std::optional<double> first_bad;
    double max_gap = 0.0, min_free = 1.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::vector<double> row{times[i], s.p_free[i], s.p_free_spectral[i], s.cross[i], s.p_total[i]};
      bool ok = in_regime(s.p_free[i]) && in_regime(s.p_free_spectral[i]) && in_regime(s.p_total[i]);
      if (sc.superposition) {
        const auto& b = sup[i];
        row.insert(row.end(), {b.probability, b.nonadiabatic, b.phonon, b.cross});
        ok = ok && in_regime(b.probability);
      }
      row.push_back(ok ? 1.0 : 0.0);
      csv.row(row);
      if (!ok) {
        first_bad = times[i];
        break;
      }
      max_gap = std::max(max_gap, std::abs(s.p_free[i] - s.p_free_spectral[i]));
      min_free = std::min(min_free, s.p_free[i]);
    }
    plot("survival.svg", "Survival probability", "t", "P", times,
         {{"free (time)", s.p_free}, {"free (spectral)", s.p_free_spectral}, {"total", s.p_total}});

    json check = {{"max_abs_time_vs_spectral", max_gap}, {"min_p_free", min_free},
                  {"p_free_final", s.p_free.back()}, {"modes", modes.size()}};
    if (sc.oracle && !traj.empty() && !first_bad) {
      const SimulationResult r = simulate_discretized_free(
          m, [&](double t) { return velocity(traj, t); }, sc.oracle_delta_kappa, sc.oracle_kappa_max,
          traj.horizon);
      check["oracle"] = {{"delta_kappa", sc.oracle_delta_kappa}, {"simulated", r.survival},
                         {"norm", r.norm}, {"abs_difference", std::abs(r.survival - s.p_free.back())}};
    }
    checks_["survival"] = check;
    log_ << std::setprecision(8) << "min P_free " << min_free << ", time vs spectral " << max_gap << '\n';
    if (first_bad) {
      flagged_ = true;
      throw RegimeBreakdownError("survival left [-0.05, 1.05] at t = " + io::format_number(*first_bad) +
                                 "; survival.csv is truncated there and flagged");
    }
  });
}

void Pipeline::adiabaticity() {
  stage("adiabaticity", [&] {
    const auto& ac = config_.survival.adiabaticity;
    const Trajectory& traj = trajectory();
    const auto kappas = linspace(0.0, ac.kappa_max, ac.kappa_points);
    const auto taus = linspace(0.0, traj.horizon, ac.tau_points);
    const AdiabaticityReport r = adiabaticity_report(
        [&](double t) { return velocity(traj, t); }, model(), kappas, taus, ac.margin);
    io::CsvWriter csv(out("adiabaticity.csv"),
                      {"tau[reduced]", "kappa[reduced]", "lhs[reduced]", "rhs[reduced]", "violated"});
    std::vector<double> count(taus.size(), 0.0);
    for (std::size_t i = 0; i < taus.size(); ++i)
      for (std::size_t j = 0; j < kappas.size(); ++j) {
        const std::size_t k = i * kappas.size() + j;
        csv.row({taus[i], kappas[j], r.lhs[k], r.rhs[j], r.violated[k] ? 1.0 : 0.0});
        count[i] += r.violated[k] ? 1.0 : 0.0;
      }
    plot("adiabaticity.svg", "Adiabaticity violations", "tau", "violating kappa nodes", taus,
         {{"violations", count}});
    json check = {{"violations", r.violations}, {"margin", r.margin}};
    if (r.violations > 0) {
      check["band"] = {r.band_lo, r.band_hi};
      log_ << std::setprecision(6) << "violated kappa band [" << r.band_lo << ", " << r.band_hi << "] ("
           << r.violations << " of " << r.lhs.size() << " nodes)\n";
    } else {
      log_ << "no adiabaticity violations\n";
    }
    checks_["adiabaticity"] = check;
  });
}

void Pipeline::run_all() {
  morse();
  kernel();
  spectrum();
  fit();
  optimize();
  survival();
  adiabaticity();
}

void Pipeline::write_manifest(const std::optional<std::string>& failure) const {
  std::filesystem::create_directories(config_.output.directory);
  json completed = json::array();
  for (const auto& s : stages_) completed.push_back(s["stage"]);
  json manifest = {{"version", kVersion},
                   {"compiler", __VERSION__},
                   {"json_library", NLOHMANN_JSON_VERSION_MAJOR * 10000 + NLOHMANN_JSON_VERSION_MINOR * 100 +
                                        NLOHMANN_JSON_VERSION_PATCH},
                   {"simd_backend", std::string(simd::backend_name(simd::active_backend()))},
                   {"config_hash", hex64(io::config_hash(config_))},
                   {"completed_stages", completed},
                   {"timings", stages_},
                   {"checks", checks_},
                   {"flagged", flagged_},
                   {"config", config_.source}};
  if (checks_.contains("fluence_horizon")) manifest["horizon"] = checks_["fluence_horizon"]["horizon"];
  if (failure) manifest["failure"] = *failure;
  io::write_json(out("manifest.json"), manifest);
}

}  // namespace tweezer
