#include <cmath>

#include "tweezer/simd.hpp"

namespace tweezer::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(x[i], y[i], acc);
  return acc;
}

double cosine_sum_scalar(const double* w, const double* f, double t, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(w[i], std::cos(f[i] * t), acc);
  return acc;
}

void phase_sum_scalar(const double* w, const double* f, double t, std::size_t n, double* re,
                      double* im) {
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = f[i] * t;
    acc_re = std::fma(w[i], std::cos(phase), acc_re);
    acc_im = std::fma(w[i], std::sin(phase), acc_im);
  }
  *re = acc_re;
  *im = acc_im;
}

void sincos_table_scalar(const double* f, double t, std::size_t n, double* c, double* s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = f[i] * t;
    c[i] = std::cos(phase);
    s[i] = std::sin(phase);
  }
}

void complex_dot_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                        std::size_t n, double* re, double* im) {
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc_re = std::fma(ar[i], br[i], acc_re);
    acc_re = std::fma(-ai[i], bi[i], acc_re);
    acc_im = std::fma(ar[i], bi[i], acc_im);
    acc_im = std::fma(ai[i], br[i], acc_im);
  }
  *re = acc_re;
  *im = acc_im;
}

constexpr KernelTable kScalar{dot_scalar, cosine_sum_scalar, phase_sum_scalar,
                              sincos_table_scalar, complex_dot_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace tweezer::simd
