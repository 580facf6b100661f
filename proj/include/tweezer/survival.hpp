#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tweezer/kernel.hpp"
#include "tweezer/optimizer.hpp"

namespace tweezer {

/// Bogoliubov mode with Froehlich coupling V_k.
struct PhononMode {
  double k = 1.0;
  Complex V;
  double Omega = 1.0;
};

/// Throws DomainError unless Omega > 0 and k != 0.
void validate_mode(const PhononMode& mode);

using VelocityFn = std::function<double(double)>;

/// p(t, w) = int_0^t e^{-i w t1} p(t1) dt1 = sum_i r_i (e^{(s_i - i w) t} - 1) / (s_i - i w).
Complex velocity_spectrum(const Trajectory& traj, double t, double omega);

struct SurvivalOptions {
  double kappa_max = 15.0;
  double omega_quad_tol = 1e-10;  ///< relative tolerance of the spectral quadrature
  double time_panel = 0.25;       ///< panel width of the time-domain Gauss-Legendre rule
  std::size_t time_nodes = 10;
};

/// 1 - (1/4 pi) int G(w) |p(t, w)|^2 dw over both lobes |w| > gap. Each lobe
/// is integrated in kappa, where G dw = 2 pi a_kappa dkappa.
double survival_free_spectral(const Trajectory& traj, const LeakageSpectrum& spec, double t,
                              const SurvivalOptions& opts = {});

/// Kernel samples on a uniform lag grid with cubic interpolation; K is even.
class KernelCache {
 public:
  KernelCache(const KernelEvaluator& kernel, double t_max, double step = 2.5e-3);
  double operator()(double lag) const noexcept;

 private:
  double step_;
  std::vector<double> values_;
};

/// 1 - int_0^t dt1 int_0^t1 dt2 p(t1) p(t2) K(t1 - t2) on a composite
/// Gauss-Legendre rule (fixed nodes, hence exactly bilinear in p).
double survival_free_time(const VelocityFn& velocity, const KernelCache& kernel, double t,
                          const SurvivalOptions& opts = {});
double survival_free_time(const Trajectory& traj, const MorseModel& model, double t,
                          const SurvivalOptions& opts = {});

/// d_{0 kappa}^k = V_k int phi_0(q) e^{i k q} phi_kappa(q) dq by adaptive quadrature.
Complex phonon_coupling(const MorseModel& model, const PhononMode& mode, double kappa);

/// phi_0 phi_kappa on a fixed q-rule for a kappa-rule, so couplings for any
/// mode reduce to phase sums over q (SIMD).
class ContinuumOverlaps {
 public:
  ContinuumOverlaps(const MorseModel& model, double kappa_max = 6.0, double kappa_panel = 0.5,
                    std::size_t kappa_nodes = 8);

  std::size_t size() const noexcept { return kappa_.size(); }
  std::span<const double> kappa() const noexcept { return kappa_; }
  std::span<const double> kappa_weights() const noexcept { return kappa_w_; }
  std::span<const double> omega_k0() const noexcept { return omega_; }
  std::span<const double> mu() const noexcept { return mu_; }
  /// d_{0 kappa_j}^k for every rule node
  std::vector<Complex> couplings(const PhononMode& mode) const;

 private:
  std::vector<double> kappa_, kappa_w_, omega_, mu_;
  std::vector<double> q_;
  std::vector<std::vector<double>> rows_;  ///< w_q phi_0(q) phi_kappa(q)
};

/// Pure phonon leakage int dkappa |d|^2 |int_0^t e^{-i (omega_kappa0 - Omega) t1} dt1|^2.
double phonon_leakage(const ContinuumOverlaps& table, const std::vector<Complex>& d,
                      const PhononMode& mode, double t);

/// Y = int dkappa int_0^t dt1 int_0^t1 dt2 d(t1) gamma*(t2) with
/// d(t) = d e^{-i (omega_kappa0 - Omega) t}, gamma(t) = p(t) mu e^{-i omega_kappa0 t}.
Complex cross_amplitude(const Trajectory& traj, const ContinuumOverlaps& table,
                        const std::vector<Complex>& d, const PhononMode& mode, double t);

/// |-i Y|^2 >= 0, the dissipative enhancement of one mode.
double cross_term(const Trajectory& traj, const ContinuumOverlaps& table, const PhononMode& mode,
                  double t);

struct SurvivalBreakdown {
  double probability = 1.0;
  double nonadiabatic = 0.0;  ///< 1 - P_free
  double phonon = 0.0;        ///< pure phonon leakage, trajectory independent
  double cross = 0.0;         ///< controllable interference contribution (signed)
};

/// Initial state |0; 1_k0>: P = 1 - nonadiabatic - phonon.
SurvivalBreakdown survival_one_phonon(const Trajectory& traj, const MorseModel& model,
                                      const ContinuumOverlaps& table, const PhononMode& mode,
                                      double t, const SurvivalOptions& opts = {});

/// Initial state (|0; 0> + |0; 1_k0>)/sqrt 2:
/// P = 1 - nonadiabatic - phonon / 2 - 2 Re(i Y).
SurvivalBreakdown survival_superposition(const Trajectory& traj, const MorseModel& model,
                                         const ContinuumOverlaps& table, const PhononMode& mode,
                                         double t, const SurvivalOptions& opts = {});

struct SurvivalSeries {
  std::vector<double> times;
  std::vector<double> p_free;        ///< time-domain
  std::vector<double> p_free_spectral;
  std::vector<double> p_total;       ///< p_free + sum_k cross_term (equals p_free without modes)
  std::vector<double> cross;         ///< sum_k cross_term
  bool breakdown = false;            ///< a value left [-0.05, 1.05]
};

/// Evaluates every term on a time grid. Throws RegimeBreakdownError when a
/// probability leaves [-0.05, 1.05] and `strict`; otherwise flags it.
/// `overlaps` reuses a prebuilt table for the mode couplings; when null and
/// modes are given, a default table is built.
SurvivalSeries survival_series(const Trajectory& traj, const MorseModel& model,
                               std::span<const double> times, std::span<const PhononMode> modes,
                               const SurvivalOptions& opts = {}, bool strict = true,
                               const ContinuumOverlaps* overlaps = nullptr);

void check_regime(double probability, const std::string& what);

struct AdiabaticityReport {
  std::vector<double> taus;
  std::vector<double> kappas;
  std::vector<double> lhs;     ///< |p(tau) mu_kappa|, row-major [tau][kappa]
  std::vector<double> rhs;     ///< omega_kappa0 per kappa
  std::vector<bool> violated;  ///< lhs >= margin rhs, row-major
  std::size_t violations = 0;
  double band_lo = 0.0;        ///< smallest violating kappa (valid when violations > 0)
  double band_hi = 0.0;
  double margin = 0.1;
};

AdiabaticityReport adiabaticity_report(const VelocityFn& velocity, const MorseModel& model,
                                       std::span<const double> kappa_grid,
                                       std::span<const double> tau_grid, double margin = 0.1);

struct SimulationOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-12;
  std::size_t max_steps = 2000000;
};

struct SimulationResult {
  double survival = 1.0;  ///< |alpha|^2
  double norm = 1.0;      ///< |alpha|^2 + sum |beta|^2
  std::size_t steps = 0;
  std::size_t modes = 0;
};

/// Bound amplitude coupled to a midpoint kappa-grid (j + 1/2) dkappa < kappa_max
/// through gamma_j(t) = p(t) mu_j sqrt(dkappa) e^{-i omega_j t}:
///   alpha' = -sum_j gamma_j beta_j,  beta_j' = conj(gamma_j) alpha,
/// integrated by adaptive Dormand-Prince 5(4). Throws StepSizeError when the
/// step underflows min_step.
SimulationResult simulate_discretized_free(const MorseModel& model, const VelocityFn& velocity,
                                           double delta_kappa, double kappa_max, double t,
                                           const SimulationOptions& opts = {});

}  // namespace tweezer
