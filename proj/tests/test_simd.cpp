#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tweezer/simd.hpp"

using namespace tweezer;

TEST_SUITE("simd") {

namespace {

struct Inputs {
  std::vector<double> a, b, c, d;
};

Inputs random_inputs(std::size_t n, std::uint32_t seed, double scale) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  Inputs in;
  for (auto* v : {&in.a, &in.b, &in.c, &in.d}) {
    v->resize(n);
    for (double& x : *v) x = u(rng);
  }
  return in;
}

double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("avx2 kernels match the scalar reference") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (avx == nullptr || simd::best_available_backend() != simd::Backend::Avx2) {
    MESSAGE("AVX2 unavailable; only the scalar path is exercised");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  // lengths straddle the 4-wide vector width and its remainder handling
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 1001u}) {
    CAPTURE(n);
    const Inputs in = random_inputs(n, 7 + static_cast<std::uint32_t>(n), 3.0);
    const double bound = 1e-14 * (1.0 + abs_sum(in.a) * (1.0 + abs_sum(in.b)));

    CHECK(std::abs(avx->dot(in.a.data(), in.b.data(), n) - ref.dot(in.a.data(), in.b.data(), n)) <= bound);

    for (double t : {0.0, 0.3, 17.5, -80.0, 1234.5}) {
      CAPTURE(t);
      const double x = avx->cosine_sum(in.a.data(), in.b.data(), t, n);
      const double y = ref.cosine_sum(in.a.data(), in.b.data(), t, n);
      CHECK(std::abs(x - y) <= 1e-13 * (1.0 + abs_sum(in.a)));

      double re1 = 0, im1 = 0, re2 = 0, im2 = 0;
      avx->phase_sum(in.a.data(), in.b.data(), t, n, &re1, &im1);
      ref.phase_sum(in.a.data(), in.b.data(), t, n, &re2, &im2);
      CHECK(std::abs(re1 - re2) <= 1e-13 * (1.0 + abs_sum(in.a)));
      CHECK(std::abs(im1 - im2) <= 1e-13 * (1.0 + abs_sum(in.a)));

      std::vector<double> c1(n), s1(n), c2(n), s2(n);
      avx->sincos_table(in.b.data(), t, n, c1.data(), s1.data());
      ref.sincos_table(in.b.data(), t, n, c2.data(), s2.data());
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(c1[i] - c2[i]) <= 1e-14);
        CHECK(std::abs(s1[i] - s2[i]) <= 1e-14);
      }
    }

    double r1 = 0, i1 = 0, r2 = 0, i2 = 0;
    avx->complex_dot(in.a.data(), in.b.data(), in.c.data(), in.d.data(), n, &r1, &i1);
    ref.complex_dot(in.a.data(), in.b.data(), in.c.data(), in.d.data(), n, &r2, &i2);
    const double cb = 1e-14 * (1.0 + (abs_sum(in.a) + abs_sum(in.b)) * (abs_sum(in.c) + abs_sum(in.d)));
    CHECK(std::abs(r1 - r2) <= cb);
    CHECK(std::abs(i1 - i2) <= cb);
  }
}

TEST_CASE("scalar kernels match direct formulas") {
  const Inputs in = random_inputs(33, 99, 2.0);
  const double t = 4.25;
  double cs = 0.0, dot = 0.0;
  std::complex<double> ph{}, cd{};
  for (std::size_t i = 0; i < 33; ++i) {
    cs += in.a[i] * std::cos(in.b[i] * t);
    dot += in.a[i] * in.b[i];
    ph += in.a[i] * std::polar(1.0, in.b[i] * t);
    cd += std::complex<double>(in.a[i], in.b[i]) * std::complex<double>(in.c[i], in.d[i]);
  }
  const auto& ref = simd::scalar_kernels();
  CHECK(ref.cosine_sum(in.a.data(), in.b.data(), t, 33) == doctest::Approx(cs).epsilon(1e-13));
  CHECK(ref.dot(in.a.data(), in.b.data(), 33) == doctest::Approx(dot).epsilon(1e-14));
  double re = 0, im = 0;
  ref.phase_sum(in.a.data(), in.b.data(), t, 33, &re, &im);
  CHECK(re == doctest::Approx(ph.real()).epsilon(1e-13));
  CHECK(im == doctest::Approx(ph.imag()).epsilon(1e-13));
  ref.complex_dot(in.a.data(), in.b.data(), in.c.data(), in.d.data(), 33, &re, &im);
  CHECK(re == doctest::Approx(cd.real()).epsilon(1e-13));
  CHECK(im == doctest::Approx(cd.imag()).epsilon(1e-13));
}

TEST_CASE("backend selection") {
  const simd::Backend original = simd::active_backend();
  CHECK(simd::set_backend(simd::Backend::Scalar));
  CHECK(simd::active_backend() == simd::Backend::Scalar);
  const std::vector<double> w{1.0, 2.0}, f{0.5, 1.5};
  const double scalar = simd::cosine_sum(w, f, 2.0);
  CHECK(scalar == doctest::Approx(std::cos(1.0) + 2.0 * std::cos(3.0)).epsilon(1e-15));
  if (simd::set_backend(simd::Backend::Avx2)) {
    CHECK(simd::cosine_sum(w, f, 2.0) == doctest::Approx(scalar).epsilon(1e-14));
  }
  CHECK(simd::backend_name(simd::Backend::Scalar) == "scalar");
  simd::set_backend(original);
}

}  // TEST_SUITE
