#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

#include "tweezer/simd.hpp"

namespace tweezer::simd {

#if TWEEZER_HAVE_AVX2
const KernelTable* avx2_kernels_impl() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if TWEEZER_HAVE_AVX2
  return avx2_kernels_impl();
#else
  return nullptr;
#endif
}

namespace {

bool cpu_has_avx2() noexcept {
#if TWEEZER_HAVE_AVX2 && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend backend) noexcept {
  if (backend == Backend::Avx2 && cpu_has_avx2()) return avx2_kernels();
  return &scalar_kernels();
}

Backend initial_backend() noexcept {
  // TWEEZER_SIMD=scalar pins the reference path for debugging.
  if (const char* env = std::getenv("TWEEZER_SIMD"); env && std::strcmp(env, "scalar") == 0)
    return Backend::Scalar;
  return best_available_backend();
}

struct State {
  std::atomic<Backend> backend{initial_backend()};
};

State& state() noexcept {
  static State s;
  return s;
}

const KernelTable& active() noexcept { return *table_for(state().backend.load()); }

}  // namespace

Backend best_available_backend() noexcept {
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

Backend active_backend() noexcept { return state().backend.load(); }

bool set_backend(Backend backend) noexcept {
  if (backend == Backend::Avx2 && !cpu_has_avx2()) return false;
  state().backend.store(backend);
  return true;
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

double cosine_sum(std::span<const double> w, std::span<const double> f, double t) noexcept {
  assert(w.size() == f.size());
  return active().cosine_sum(w.data(), f.data(), t, w.size());
}

std::complex<double> phase_sum(std::span<const double> w, std::span<const double> f,
                               double t) noexcept {
  assert(w.size() == f.size());
  double re = 0.0, im = 0.0;
  active().phase_sum(w.data(), f.data(), t, w.size(), &re, &im);
  return {re, im};
}

void sincos_table(std::span<const double> f, double t, std::span<double> c,
                  std::span<double> s) noexcept {
  assert(c.size() == f.size() && s.size() == f.size());
  active().sincos_table(f.data(), t, f.size(), c.data(), s.data());
}

std::complex<double> complex_dot(std::span<const double> ar, std::span<const double> ai,
                                 std::span<const double> br,
                                 std::span<const double> bi) noexcept {
  assert(ai.size() == ar.size() && br.size() == ar.size() && bi.size() == ar.size());
  double re = 0.0, im = 0.0;
  active().complex_dot(ar.data(), ai.data(), br.data(), bi.data(), ar.size(), &re, &im);
  return {re, im};
}

}  // namespace tweezer::simd
