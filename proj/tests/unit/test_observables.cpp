#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rtdiff/errors.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff {
namespace {

oracle::Fn as_fn(const Observable& f) {
  return [f](double x) { return f(x); };
}

Observable from_step(const oracle::StepData& s) {
  return Observable::step(s.breaks, s.values);
}

TEST(Integrate, LebesgueClosedForms) {
  EXPECT_DOUBLE_EQ(integrate(Observable::identity(), MeasureSpec::lebesgue()), 0.5);
  EXPECT_NEAR(integrate(Observable::indicator(0.0, 0.4), MeasureSpec::lebesgue()), 0.4, 1e-15);
  EXPECT_NEAR(integrate_square(Observable::identity(), MeasureSpec::lebesgue()), 1.0 / 3.0,
              1e-15);
  EXPECT_NEAR(integrate(Observable::polynomial({1.0, 0.0, 3.0}), MeasureSpec::lebesgue()), 2.0,
              1e-15);
}

TEST(Integrate, AtomicOrbitAveragesTheAtoms) {
  EXPECT_DOUBLE_EQ(integrate(Observable::identity(), MeasureSpec::atomic_orbit(2, 0.0)), 0.25);
  EXPECT_NEAR(integrate(Observable::indicator(0.0, 0.5), MeasureSpec::atomic_orbit(3, 0.0)),
              2.0 / 3.0, 1e-15);
}

TEST(Integrate, TabulatedUsesQuadrature) {
  std::vector<double> samples;
  for (int j = 0; j <= 100; ++j) samples.push_back(j / 100.0);
  const auto f = Observable::tabulated(samples);
  EXPECT_FALSE(f.has_closed_form());
  EXPECT_NEAR(integrate(f, MeasureSpec::lebesgue()), 0.5, 1e-9);
  EXPECT_NEAR(f(0.255), 0.255, 1e-12);
}

TEST(Observable, RejectsNegativeOrMalformed) {
  EXPECT_THROW((void)Observable::indicator(0.5, 0.5), ArgumentError);
  EXPECT_THROW((void)Observable::step({0.0, 0.5, 0.4}, {1.0, 1.0}), ArgumentError);
  EXPECT_THROW((void)Observable::step({0.0, 1.0}, {-1.0}), ArgumentError);
  EXPECT_THROW((void)Observable::polynomial({0.0, -1.0}), ArgumentError);
}

TEST(CircleAutocorrelation, IndicatorTent) {
  for (double len : {0.1, 0.25, 0.5}) {
    const auto f = Observable::indicator(0.0, len);
    for (double t : {0.0, 0.03, 0.2, 0.5, 0.77, 0.99}) {
      const double d = std::min(t, 1.0 - t);
      EXPECT_NEAR(circle_autocorrelation(f, t), std::max(len - d, 0.0), 1e-14);
      EXPECT_NEAR(circle_autocorrelation(f, t), oracle::circle_autocorrelation(as_fn(f), t, 1000000),
                  2e-6);
    }
  }
}

TEST(CircleAutocorrelation, ZeroShiftValues) {
  EXPECT_DOUBLE_EQ(circle_autocorrelation(Observable::indicator(0.0, 0.5), 0.0), 0.5);
  EXPECT_NEAR(circle_autocorrelation(Observable::identity(), 0.0), 1.0 / 3.0, 1e-15);
}

TEST(CircleAutocorrelation, IdentityMatchesQuadrature) {
  const auto f = Observable::identity();
  for (double t : {0.1, std::numbers::pi / 20.0, 0.5, 0.8}) {
    EXPECT_NEAR(circle_autocorrelation(f, t), oracle::circle_autocorrelation(as_fn(f), t, 1 << 20),
                1e-8);
  }
}

// Evenness, A(0) = int f^2, and agreement with brute force on random steps and polynomials.
TEST(CircleAutocorrelationProperty, RandomSteps) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = oracle::random_step(rng);
    const auto f = from_step(s);
    EXPECT_NEAR(circle_autocorrelation(f, 0.0), integrate_square(f, MeasureSpec::lebesgue()),
                1e-10);
    for (int i = 0; i < 5; ++i) {
      const double t = u(rng);
      const double a = circle_autocorrelation(f, t);
      EXPECT_NEAR(a, circle_autocorrelation(f, 1.0 - t), 1e-10);
      EXPECT_NEAR(a, oracle::circle_autocorrelation(as_fn(f), t, 1 << 18), 3e-4);
      EXPECT_LE(a, circle_autocorrelation(f, 0.0) + 1e-12);
    }
  }
}

TEST(CircleAutocorrelationProperty, RandomPolynomials) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> coeffs;
    for (int d = 0; d < 4; ++d) coeffs.push_back(u(rng));
    const auto f = Observable::polynomial(coeffs);
    EXPECT_NEAR(circle_autocorrelation(f, 0.0), integrate_square(f, MeasureSpec::lebesgue()),
                1e-10);
    const double t = u(rng);
    EXPECT_NEAR(circle_autocorrelation(f, t), circle_autocorrelation(f, 1.0 - t), 1e-10);
    EXPECT_NEAR(circle_autocorrelation(f, t), oracle::circle_autocorrelation(as_fn(f), t, 1 << 16),
                1e-6);
  }
}

TEST(FourierCoefficient, IdentityClosedFormAgainstQuadrature) {
  const auto f = Observable::identity();
  EXPECT_NEAR(std::abs(fourier_coefficient(f, 0) - 0.5), 0.0, 1e-15);
  for (std::int64_t m = 1; m <= 5; ++m) {
    const double oracle_mass = oracle::fourier_mass(as_fn(f), m);
    const double expected = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi * m * m);
    EXPECT_NEAR(oracle_mass, expected, 1e-8);
    EXPECT_NEAR(std::norm(fourier_coefficient(f, m)), expected, 1e-15);
    EXPECT_NEAR(std::norm(fourier_coefficient(f, -m)), expected, 1e-15);
  }
}

TEST(FourierCoefficient, IndicatorAndConjugateSymmetry) {
  EXPECT_NEAR(fourier_coefficient(Observable::indicator(0.0, 0.3), 0).real(), 0.3, 1e-15);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_step(rng);
    const auto f = from_step(s);
    for (std::int64_t m = 1; m <= 4; ++m) {
      const auto a = fourier_coefficient(f, m);
      const auto b = fourier_coefficient(f, -m);
      EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-13);
      EXPECT_NEAR(std::norm(a), oracle::fourier_mass(as_fn(f), m, 1 << 16), 1e-5);
    }
  }
}

TEST(FourierCoefficient, ParsevalForIdentity) {
  const auto f = Observable::identity();
  double total = std::norm(fourier_coefficient(f, 0));
  const std::int64_t big_m = 10000;
  for (std::int64_t m = 1; m <= big_m; ++m) total += 2.0 * std::norm(fourier_coefficient(f, m));
  EXPECT_LT(1.0 / 3.0 - total, 1e-4 / 3.0);
  EXPECT_GT(1.0 / 3.0 - total, 0.0);
}

TEST(CyclicSamples, Examples) {
  EXPECT_EQ(cyclic_samples(Observable::identity(), 1, 2, 0.0), (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(cyclic_samples(Observable::indicator(0.0, 0.5), 1, 3, 0.0),
            (std::vector<double>{1.0, 1.0, 0.0}));
  EXPECT_EQ(cyclic_samples(Observable::identity(), 1, 1, 0.37), (std::vector<double>{0.37}));
  // Two steps of 2/5 from 0: 0, 2/5, 4/5, 1/5, 3/5.
  const auto s = cyclic_samples(Observable::identity(), 2, 5, 0.0);
  const double expected[] = {0.0, 0.4, 0.8, 0.2, 0.6};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(s[k], expected[k], 1e-15);
}

TEST(SupDistance, ShiftedConstants) {
  EXPECT_NEAR(sup_distance(Observable::constant(0.3), Observable::constant(0.8)), 0.5, 1e-15);
  EXPECT_EQ(sup_distance(Observable::identity(), Observable::identity()), 0.0);
}

TEST(Observable, RangeAndSupNorm) {
  const auto f = Observable::step({0.0, 0.3, 0.6, 1.0}, {1.0, 4.0, 2.0});
  EXPECT_DOUBLE_EQ(f.sup_norm(), 4.0);
  const auto [lo, hi] = f.range_over(0.0, 0.3);
  EXPECT_DOUBLE_EQ(lo, 1.0);
  EXPECT_DOUBLE_EQ(hi, 1.0);
  const auto [lo2, hi2] = f.range_over(0.2, 0.7);
  EXPECT_DOUBLE_EQ(lo2, 1.0);
  EXPECT_DOUBLE_EQ(hi2, 4.0);
  EXPECT_EQ(f.declared_bounded_variation(), std::nullopt);
  EXPECT_EQ(f.with_declared_variation(6.0).declared_bounded_variation(), 6.0);
}

}  // namespace
}  // namespace rtdiff
