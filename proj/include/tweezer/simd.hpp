#pragma once

#include <complex>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64 with AVX2+FMA, a vectorized variant picked
// at runtime. The two agree to a few ulps per term; see tests/test_simd.cpp.
namespace tweezer::simd {

enum class Backend { Scalar, Avx2 };

/// Backend currently used by the free functions below.
Backend active_backend() noexcept;

/// Best backend the running CPU supports.
Backend best_available_backend() noexcept;

/// Forces a backend; returns false (and leaves the selection unchanged) if
/// the CPU or build does not support it.
bool set_backend(Backend backend) noexcept;

std::string_view backend_name(Backend backend) noexcept;

/// sum_i x[i] * y[i]
double dot(std::span<const double> x, std::span<const double> y) noexcept;

/// sum_i w[i] * cos(f[i] * t)
double cosine_sum(std::span<const double> w, std::span<const double> f, double t) noexcept;

/// sum_i w[i] * exp(i f[i] t)
std::complex<double> phase_sum(std::span<const double> w, std::span<const double> f,
                               double t) noexcept;

/// c[i] = cos(f[i] t), s[i] = sin(f[i] t)
void sincos_table(std::span<const double> f, double t, std::span<double> c,
                  std::span<double> s) noexcept;

/// sum_i (ar[i] + i ai[i]) * (br[i] + i bi[i])
std::complex<double> complex_dot(std::span<const double> ar, std::span<const double> ai,
                                 std::span<const double> br,
                                 std::span<const double> bi) noexcept;

/// Kernel table for one backend; exposed so tests can call both directly.
struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*cosine_sum)(const double*, const double*, double, std::size_t);
  void (*phase_sum)(const double*, const double*, double, std::size_t, double*, double*);
  void (*sincos_table)(const double*, double, std::size_t, double*, double*);
  void (*complex_dot)(const double*, const double*, const double*, const double*, std::size_t,
                      double*, double*);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_kernels() noexcept;

}  // namespace tweezer::simd
