// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after the CPU has been checked.
#include <immintrin.h>

#include <cmath>

#include "tweezer/simd.hpp"

namespace tweezer::simd {
namespace {

// Cephes minimax coefficients on [-pi/4, pi/4].
constexpr double kSin[] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                           2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                           8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                           -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                           -1.38888888888730564116e-3,  4.16666666666665929218e-2};

// pi/2 split so that n * kPio2Hi is exact inside an FMA.
constexpr double kPio2Hi = 1.5707963267948965579989817342720925807952880859375;
constexpr double kPio2Lo = 6.123233995736766035868820147291818e-17;
constexpr double kTwoOverPi = 0.63661977236758134308;
// Beyond this the int32 quadrant conversion is unsafe; such lanes fall back.
constexpr double kMaxArgument = 1.0e8;

inline __m256d poly6(__m256d z, const double* c) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 6; ++k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
  return p;
}

inline bool in_range(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
  const __m256d ok = _mm256_cmp_pd(ax, _mm256_set1_pd(kMaxArgument), _CMP_LE_OQ);
  return _mm256_movemask_pd(ok) == 0xF;
}

// Caller guarantees in_range(x).
inline void sincos4(__m256d x, __m256d* s_out, __m256d* c_out) {
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Lo), r);
  const __m256d z = _mm256_mul_pd(r, r);

  const __m256d sp = _mm256_fmadd_pd(_mm256_mul_pd(r, z), poly6(z, kSin), r);
  __m256d cp = _mm256_mul_pd(_mm256_mul_pd(z, z), poly6(z, kCos));
  cp = _mm256_add_pd(_mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)), cp);

  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256d neg_c = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256d s = _mm256_blendv_pd(sp, cp, swap);
  __m256d c = _mm256_blendv_pd(cp, sp, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_s, sign));
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_c, sign));
  *s_out = s;
  *c_out = c;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc = std::fma(x[i], y[i], acc);
  return acc;
}

double cosine_sum_avx2(const double* w, const double* f, double t, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(f + i), vt);
    if (!in_range(x)) {
      for (std::size_t j = i; j < i + 4; ++j) tail = std::fma(w[j], std::cos(f[j] * t), tail);
      continue;
    }
    __m256d s, c;
    sincos4(x, &s, &c);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), c, acc);
  }
  for (; i < n; ++i) tail = std::fma(w[i], std::cos(f[i] * t), tail);
  return hsum(acc) + tail;
}

void phase_sum_avx2(const double* w, const double* f, double t, std::size_t n, double* re,
                    double* im) {
  const __m256d vt = _mm256_set1_pd(t);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  double tail_re = 0.0;
  double tail_im = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(f + i), vt);
    if (!in_range(x)) {
      for (std::size_t j = i; j < i + 4; ++j) {
        tail_re = std::fma(w[j], std::cos(f[j] * t), tail_re);
        tail_im = std::fma(w[j], std::sin(f[j] * t), tail_im);
      }
      continue;
    }
    __m256d s, c;
    sincos4(x, &s, &c);
    const __m256d vw = _mm256_loadu_pd(w + i);
    acc_re = _mm256_fmadd_pd(vw, c, acc_re);
    acc_im = _mm256_fmadd_pd(vw, s, acc_im);
  }
  for (; i < n; ++i) {
    tail_re = std::fma(w[i], std::cos(f[i] * t), tail_re);
    tail_im = std::fma(w[i], std::sin(f[i] * t), tail_im);
  }
  *re = hsum(acc_re) + tail_re;
  *im = hsum(acc_im) + tail_im;
}

void sincos_table_avx2(const double* f, double t, std::size_t n, double* c, double* s) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(f + i), vt);
    if (!in_range(x)) {
      for (std::size_t j = i; j < i + 4; ++j) {
        c[j] = std::cos(f[j] * t);
        s[j] = std::sin(f[j] * t);
      }
      continue;
    }
    __m256d vs, vc;
    sincos4(x, &vs, &vc);
    _mm256_storeu_pd(c + i, vc);
    _mm256_storeu_pd(s + i, vs);
  }
  for (; i < n; ++i) {
    c[i] = std::cos(f[i] * t);
    s[i] = std::sin(f[i] * t);
  }
}

void complex_dot_avx2(const double* ar, const double* ai, const double* br, const double* bi,
                      std::size_t n, double* re, double* im) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xr = _mm256_loadu_pd(ar + i);
    const __m256d xi = _mm256_loadu_pd(ai + i);
    const __m256d yr = _mm256_loadu_pd(br + i);
    const __m256d yi = _mm256_loadu_pd(bi + i);
    acc_re = _mm256_fmadd_pd(xr, yr, acc_re);
    acc_re = _mm256_fnmadd_pd(xi, yi, acc_re);
    acc_im = _mm256_fmadd_pd(xr, yi, acc_im);
    acc_im = _mm256_fmadd_pd(xi, yr, acc_im);
  }
  double tail_re = 0.0;
  double tail_im = 0.0;
  for (; i < n; ++i) {
    tail_re = std::fma(ar[i], br[i], tail_re);
    tail_re = std::fma(-ai[i], bi[i], tail_re);
    tail_im = std::fma(ar[i], bi[i], tail_im);
    tail_im = std::fma(ai[i], br[i], tail_im);
  }
  *re = hsum(acc_re) + tail_re;
  *im = hsum(acc_im) + tail_im;
}

constexpr KernelTable kAvx2{dot_avx2, cosine_sum_avx2, phase_sum_avx2, sincos_table_avx2,
                            complex_dot_avx2};

}  // namespace

const KernelTable* avx2_kernels_impl() noexcept { return &kAvx2; }

}  // namespace tweezer::simd
