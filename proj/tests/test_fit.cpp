#include <doctest.h>

#include <cmath>
#include <limits>

#include "tweezer/errors.hpp"
#include "tweezer/fit.hpp"
#include "tweezer/numerics/quadrature.hpp"

using namespace tweezer;

TEST_SUITE("fit") {

namespace {

KernelSamples synthetic(const DampedOscTerm& term, double t_max, std::size_t n) {
  KernelSamples s;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    s.times.push_back(t);
    s.values.push_back(evaluate_term(term, t));
  }
  return s;
}

DampedOscFit single(const DampedOscTerm& t) {
  DampedOscFit f;
  f.terms = {t};
  return f;
}

}  // namespace

TEST_CASE("synthetic data is recovered") {
  const DampedOscTerm truth = reference_fit_term();
  const KernelSamples s = synthetic(truth, 80.0, 1600);
  DampedOscTerm start = truth;
  start.a1 *= 1.1;
  start.b1 *= 0.9;
  start.c1 *= 1.2;
  start.d1 *= 1.1;
  start.w1 *= 0.95;
  start.w2 *= 1.05;
  const DampedOscFit f = fit_kernel(s, std::span(&start, 1));
  REQUIRE(f.terms.size() == 1);
  const DampedOscTerm& got = f.terms[0];
  CHECK(got.a1 == doctest::Approx(truth.a1).epsilon(1e-6));
  CHECK(got.b1 == doctest::Approx(truth.b1).epsilon(1e-6));
  CHECK(got.c1 == doctest::Approx(truth.c1).epsilon(1e-6));
  CHECK(got.d1 == doctest::Approx(truth.d1).epsilon(1e-6));
  CHECK(std::abs(got.w1) == doctest::Approx(std::abs(truth.w1)).epsilon(1e-6));
  CHECK(got.w2 == doctest::Approx(truth.w2).epsilon(1e-6));
  CHECK(f.residual_norm < 1e-8);
}

TEST_CASE("degenerate and invalid inputs") {
  KernelSamples zero = synthetic(DampedOscTerm{0.0, 1.0, 0.0, 1.0, 0.0, 0.0}, 80.0, 200);
  const DampedOscTerm start = reference_fit_term();
  const DampedOscFit f = fit_kernel(zero, std::span(&start, 1));
  CHECK(f.terms[0].a1 == 0.0);
  CHECK(f.terms[0].c1 == 0.0);
  CHECK(f.residual_norm == 0.0);

  const KernelSamples few = synthetic(start, 80.0, 20);
  CHECK_THROWS_AS(fit_kernel(few, std::span(&start, 1)), DegenerateInputError);

  // a growing oscillation forces a negative decay rate
  const KernelSamples growing = synthetic(DampedOscTerm{0.5, -0.05, 0.0, 0.1, 0.4, 0.0}, 40.0, 400);
  DampedOscTerm g0{0.5, 0.01, 0.0, 0.1, 0.4, 0.1};
  CHECK_THROWS_AS(fit_kernel(growing, std::span(&g0, 1)), AcausalFitError);

  const KernelSamples s = synthetic(start, 80.0, 400);
  DampedOscTerm nan_start = start;
  nan_start.b1 = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_kernel(s, std::span(&nan_start, 1)), FitDivergenceError);
}

TEST_CASE("fit of the Morse kernel") {
  const MorseModel m = build_model(0.5, 1.0, 1.0);
  const KernelSamples s = sample_kernel(m, 80.0, 1600);
  const DampedOscTerm guess = initial_guess(s);
  CHECK(guess.a1 == doctest::Approx(s.values.front()));
  CHECK(guess.c1 == 0.0);
  CHECK(guess.d1 == doctest::Approx(guess.b1 / 10));
  CHECK(guess.w2 == doctest::Approx(guess.w1 / 2));
  const DampedOscFit f = fit_kernel(s, std::span(&guess, 1));
  const DampedOscTerm ref = reference_fit_term();
  const DampedOscTerm& got = f.terms[0];
  CHECK(got.a1 == doctest::Approx(ref.a1).epsilon(0.25));
  CHECK(got.b1 == doctest::Approx(ref.b1).epsilon(0.25));
  CHECK(got.c1 == doctest::Approx(ref.c1).epsilon(0.25));
  CHECK(got.d1 == doctest::Approx(ref.d1).epsilon(0.25));
  CHECK(std::abs(got.w1) == doctest::Approx(std::abs(ref.w1)).epsilon(0.25));
  CHECK(got.w2 == doctest::Approx(ref.w2).epsilon(0.25));
  CHECK(f.residual_norm <= 2.0 * fit_residual(s, std::span(&ref, 1)));
}

TEST_CASE("laplace transform closed forms") {
  const RationalLaplace e = laplace_of_fit(single({1.0, 1.0, 0.0, 1.0, 0.0, 0.0}));
  for (Complex s : {Complex{0.5}, Complex{2.0, 1.0}})
    CHECK(std::abs(e(s) - 1.0 / (s + 1.0)) < 1e-14);
  const RationalLaplace osc = laplace_of_fit(single({0.0, 1.0, 1.0, 0.5, 0.0, 2.0}));
  for (Complex s : {Complex{0.5}, Complex{2.0, 1.0}})
    CHECK(std::abs(osc(s) - 2.0 / ((s + 0.5) * (s + 0.5) + 4.0)) < 1e-14);
}

TEST_CASE("laplace transform against numerical quadrature") {
  const DampedOscFit f = single(reference_fit_term());
  const RationalLaplace g = laplace_of_fit(f);
  CHECK(g.denominator.degree() == 4);
  CHECK(g.numerator.degree() == 3);
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-12;
  for (Complex s : {Complex{0.5}, Complex{1.0}, Complex{2.0}, Complex{4.0, 3.0}}) {
    CAPTURE(s);
    const Complex quad = integrate_adaptive<Complex>([&](double t) { return std::exp(-s * t) * f(t); }, 0.0,
                                                     std::numeric_limits<double>::infinity(), opts)
                             .value;
    CHECK(std::abs(g(s) - quad) <= 1e-8 * std::abs(quad));
  }
  // initial-value theorem: s G(s) -> g(0+) = a1
  const double s = 1e8;
  CHECK((s * g(s)).real() == doctest::Approx(f.terms[0].a1).epsilon(1e-6));
}

TEST_CASE("denominator roots are the damped frequencies") {
  const DampedOscTerm t = reference_fit_term();
  const RootSet rs = find_roots(laplace_of_fit(single(t)).denominator);
  const std::vector<Complex> expected{{-t.b1, t.w1}, {-t.b1, -t.w1}, {-t.d1, t.w2}, {-t.d1, -t.w2}};
  for (Complex e : expected) {
    double best = 1e300;
    for (Complex r : rs.roots) best = std::min(best, std::abs(r - e));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("exponential form reproduces the fit") {
  const DampedOscFit f = single(reference_fit_term());
  const ExponentialSum e = exponential_form(f);
  CHECK(e.rates.size() == 4);
  for (double t : {0.0, 0.3, 5.0, 20.0}) {
    Complex acc{};
    for (std::size_t i = 0; i < e.rates.size(); ++i) acc += e.amplitudes[i] * std::exp(e.rates[i] * t);
    CHECK(acc.real() == doctest::Approx(f(t)).epsilon(1e-12));
    CHECK(std::abs(acc.imag()) < 1e-14);
  }
  CHECK(f(-1.0) == 0.0);
}

}  // TEST_SUITE
