#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tweezer/morse.hpp"
#include "tweezer/numerics/quadrature.hpp"

namespace tweezer {

/// Uniform samples of the memory kernel K(t) = 2 Re Phi(t).
struct KernelSamples {
  std::vector<double> times;
  std::vector<double> values;
  double quadrature_tol = 0.0;
};

struct KernelOptions {
  double kappa_max = 15.0;   ///< a_kappa < 1e-16 beyond this for the shipped trap
  double quad_tol = 1e-10;   ///< absolute tolerance of the reference quadrature
  std::size_t nodes_per_panel = 10;
  double max_panel_width = 0.25;
};

/// K(t) = int_0^inf 2 a_kappa cos(omega_kappa0 t) dkappa by adaptive
/// quadrature, split at the zeros of the cosine so each panel holds at most
/// half a period. Reference implementation; slow for large t.
double memory_kernel(const MorseModel& model, double t, const KernelOptions& opts = {});

/// Tabulates a_kappa once on a composite Gauss-Legendre kappa-rule fine enough
/// for |t| <= t_max, then evaluates K(t) as a weighted cosine sum (SIMD).
class KernelEvaluator {
 public:
  KernelEvaluator(const MorseModel& model, double t_max, const KernelOptions& opts = {});

  double operator()(double t) const noexcept;
  double t_max() const noexcept { return t_max_; }

  /// Rule nodes and the precomputed 2 a_kappa w_kappa weights / omega_kappa0 frequencies.
  std::span<const double> kappa() const noexcept { return kappa_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> frequencies() const noexcept { return freqs_; }

 private:
  double t_max_;
  std::vector<double> kappa_;
  std::vector<double> weights_;
  std::vector<double> freqs_;
};

/// n >= 16 uniform samples on [0, t_max].
KernelSamples sample_kernel(const MorseModel& model, double t_max, std::size_t n,
                            const KernelOptions& opts = {});

/// Fourier transform of the memory kernel,
///   G(w) = 2 pi sqrt(m*/2) a(kappa(|w|)) / sqrt(|w| - gap),
///   kappa(|w|) = sqrt(2 m* (|w| - gap)),
/// and zero for |w| <= gap = |omega0|.
class LeakageSpectrum {
 public:
  explicit LeakageSpectrum(const MorseModel& model) : model_(model), gap_(-model.omega0) {}

  double operator()(double omega) const;
  double gap() const noexcept { return gap_; }
  const MorseModel& model() const noexcept { return model_; }
  /// 2 pi sqrt(m*/2), the constant in front of a(kappa) / sqrt(|w| - gap)
  double prefactor() const noexcept;

 private:
  MorseModel model_;
  double gap_;
};

/// int K(t) w(t) e^{i omega t} dt over [-T, T] from samples on [0, T]
/// (K even), with the Hann taper w(t) = cos^2(pi t / 2T); trapezoid rule on
/// the uniform sample grid.
double windowed_fourier(const KernelSamples& samples, double omega);

}  // namespace tweezer
