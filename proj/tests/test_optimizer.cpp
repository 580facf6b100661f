#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "tweezer/errors.hpp"
#include "tweezer/kernel.hpp"
#include "tweezer/numerics/quadrature.hpp"

using namespace tweezer;
using tweezer::testing::fitted_kernel;
using tweezer::testing::trap;

TEST_SUITE("optimizer") {

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

}  // namespace

TEST_CASE("characteristic polynomial") {
  const RationalLaplace g{Polynomial{1.0}, Polynomial{1.0, 1.0}};
  const Polynomial q = characteristic_polynomial(g, 1.0);
  REQUIRE(q.degree() == 3);
  CHECK(q[0] == Complex{-1.0});
  CHECK(q[1] == Complex{0.0});
  CHECK(q[2] == Complex{1.0});
  CHECK(q[3] == Complex{1.0});

  const RationalLaplace fit = laplace_of_fit(fitted_kernel());
  const Polynomial plus = characteristic_polynomial(fit, 0.01);
  const Polynomial minus = characteristic_polynomial(fit, -0.01);
  CHECK(minus.degree() == 6);
  CHECK(minus.has_real_coefficients());
  // the multiplier only enters through the numerator term
  const Polynomial sum = plus + minus;
  const Polynomial twice = Complex{2.0} * (Polynomial{0.0, 0.0, 1.0} * fit.denominator);
  for (std::size_t k = 0; k <= 6; ++k) CHECK(std::abs(sum[k] - twice[k]) < 1e-12 * std::abs(twice.leading()));
  CHECK_THROWS_AS(characteristic_polynomial(fit, 0.0), ZeroLambdaError);
}

TEST_CASE("solve_trajectory preconditions") {
  const DampedOscFit& f = fitted_kernel();
  CHECK_THROWS_AS(solve_trajectory(f, -0.01, 0.0, 1.0), ZeroAccelerationError);
  CHECK_THROWS_AS(solve_trajectory(f, 0.0, 1.0, 1.0), ZeroLambdaError);
  CHECK_THROWS_AS(solve_trajectory(f, -0.01, 1.0, 0.0), DomainError);
  const RationalLaplace doubled{Polynomial{}, Polynomial{1.0, 2.0, 1.0}};
  CHECK_THROWS_AS(solve_trajectory(doubled, 1.0, 1.0, 1.0), MultiplePoleError);
}

TEST_CASE("pole structure") {
  const DampedOscFit& f = fitted_kernel();
  const Trajectory neg = solve_trajectory(f, -0.01, 1.0, 1.0);
  REQUIRE(neg.poles.size() == 6);
  const PoleClassification cn = classify_poles(neg);
  CHECK(cn.real_positive == 0);
  CHECK(cn.unpaired_complex == 0);
  CHECK(cn.complex_rhp_pairs >= 1);
  CHECK(cn.verdict == "growing-oscillatory");

  const PoleClassification cp = classify_poles(solve_trajectory(f, 1.0, 1.0, 1.0));
  CHECK(cp.real_positive >= 1);
  CHECK(cp.verdict == "divergent-exponential");

  Trajectory lhp;
  lhp.poles = {{-1.0, 0.0}, {-2.0, 1.0}, {-2.0, -1.0}};
  lhp.residues = {1.0, 1.0, 1.0};
  CHECK(classify_poles(lhp).verdict == "stable");
  CHECK(classify_poles(lhp).real_negative == 1);
  CHECK(classify_poles(lhp).complex_lhp_pairs == 1);
}

TEST_CASE("initial conditions and kinematics") {
  const Trajectory t = solve_trajectory(fitted_kernel(), -0.01, 1.0, 2.0);
  CHECK(std::abs(velocity(t, 0.0)) < 1e-14);
  CHECK(position(t, 0.0) == 0.0);
  const double h = 1e-6;
  CHECK((velocity(t, h) - velocity(t, 0.0)) / h == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(acceleration(t, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double s : {0.3, 1.0, 1.9}) {
    CAPTURE(s);
    const double fd = (position(t, s + 1e-5) - position(t, s - 1e-5)) / 2e-5;
    CHECK(fd == doctest::Approx(velocity(t, s)).epsilon(1e-6));
    const double fd2 = (velocity(t, s + 1e-5) - velocity(t, s - 1e-5)) / 2e-5;
    CHECK(fd2 == doctest::Approx(acceleration(t, s)).epsilon(1e-6));
  }
}

TEST_CASE("fluence") {
  const Trajectory t = solve_trajectory(fitted_kernel(), -0.01, 1.0, 1.5);
  QuadOptions o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  const double quad =
      integrate_adaptive([&](double s) { return std::pow(acceleration(t, s), 2); }, 0.0, 1.5, o).value;
  CHECK(fluence(t) == doctest::Approx(quad).epsilon(1e-8));
  CHECK(fluence(Trajectory{}, 3.0) == 0.0);

  const double T = find_fluence_horizon(t, 7.03219, 60.0);
  CHECK(fluence(t, T) == doctest::Approx(7.03219).epsilon(1e-10));
  CHECK(T == doctest::Approx(1.33025).epsilon(1e-4));
  CHECK_THROWS_AS(find_fluence_horizon(t, 7.03219, 0.1), DomainError);

  // a zero pole falls back to the linear limit term
  Trajectory lin;
  lin.poles = {{0.0, 0.0}, {-1.0, 0.0}};
  lin.residues = {{1.0, 0.0}, {-1.0, 0.0}};
  lin.horizon = 2.0;
  CHECK(fluence(lin) == doctest::Approx(0.5 * (1.0 - std::exp(-4.0))).epsilon(1e-12));
  CHECK(position(lin, 2.0) == doctest::Approx(2.0 - (1.0 - std::exp(-2.0))).epsilon(1e-12));
}

TEST_CASE("Euler-Lagrange residual") {
  const DampedOscFit& f = fitted_kernel();
  const auto kernel = [&](double s) { return f(s); };
  for (double lambda : {-0.01, -0.1, 1.0}) {
    CAPTURE(lambda);
    const Trajectory t = solve_trajectory(f, lambda, 1.0, 1.0);
    const double T = find_fluence_horizon(t, 7.03219, 60.0);
    CHECK(el_residual(with_horizon(t, T), kernel, grid(0.0, T, 41)) <= 1e-6);
  }
  const Trajectory t = solve_trajectory(f, -0.01, 1.0, 1.33);
  const KernelEvaluator exact(trap(), 2.0);
  const double true_residual = el_residual(t, [&](double s) { return exact(s); }, grid(0.0, 1.33, 41));
  CHECK(true_residual > 1e-6);
  CHECK(true_residual < 0.2);
  CHECK(el_residual(Trajectory{}, kernel, grid(0.0, 1.0, 5)) == 0.0);
}

TEST_CASE("Lagrange multiplier self-check") {
  const DampedOscFit& f = fitted_kernel();
  for (double lambda : {-0.01, -0.1}) {
    const Trajectory t = solve_trajectory(f, lambda, 1.0, 1.0);
    const LagrangeCheck c = lagrange_selfcheck(with_horizon(t, find_fluence_horizon(t, 7.03219, 60.0)), f);
    CHECK(c.ratio >= 0.9);
    CHECK(c.ratio <= 1.1);
    CHECK(c.recovered > 0.0);
  }
  CHECK_THROWS_AS(lagrange_selfcheck(Trajectory{}, f), DegenerateInputError);
}

TEST_CASE("velocity and position stay real for random fits") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> perturb(0.8, 1.2), mag(-3.0, 0.0), sign(0.0, 1.0);
  const DampedOscTerm base = fitted_kernel().terms[0];
  for (int trial = 0; trial < 12; ++trial) {
    DampedOscFit f;
    DampedOscTerm t = base;
    t.a1 *= perturb(rng);
    t.b1 *= perturb(rng);
    t.c1 *= perturb(rng);
    t.d1 *= perturb(rng);
    t.w1 *= perturb(rng);
    t.w2 *= perturb(rng);
    f.terms = {t};
    const double lambda = (sign(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, mag(rng));
    CAPTURE(lambda);
    const Trajectory traj = solve_trajectory(f, lambda, 1.0, 3.0);
    for (double s : grid(0.0, 3.0, 1000)) {
      CHECK_NOTHROW(velocity(traj, s));
      CHECK_NOTHROW(position(traj, s));
    }
  }
}

TEST_CASE("helpers") {
  const Trajectory t = solve_trajectory(fitted_kernel(), -0.01, 1.0, 1.0);
  CHECK(velocity(scaled(t, 0.5), 0.7) == doctest::Approx(0.5 * velocity(t, 0.7)).epsilon(1e-14));
  CHECK(with_horizon(t, 4.0).horizon == 4.0);
  const auto lg = lambda_grid(-1.0, -0.001, 4);
  REQUIRE(lg.size() == 4);
  CHECK(lg[0] == doctest::Approx(-1.0));
  CHECK(lg[1] == doctest::Approx(-0.1));
  CHECK(lg[3] == doctest::Approx(-0.001));
  CHECK(std::abs(expm1_ratio(Complex{0.0, 0.0}, 2.5) - 2.5) < 1e-15);
  CHECK(std::abs(expm1_ratio(Complex{1e-9, 0.0}, 1.0) - (1.0 + 0.5e-9)) < 1e-15);
  CHECK(std::abs(expm1_ratio(Complex{1.0, 2.0}, 0.5) - (std::exp(Complex{0.5, 1.0}) - 1.0) / Complex{1.0, 2.0}) < 1e-14);
}

}  // TEST_SUITE
