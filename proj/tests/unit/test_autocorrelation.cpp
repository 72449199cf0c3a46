#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/errors.hpp"

namespace rtdiff {
namespace {

oracle::Fn as_fn(const Observable& f) {
  return [f](double x) { return f(x); };
}

void expect_symmetric(const XiSequence& xi) {
  const auto z_max = static_cast<std::int64_t>(xi.half_window());
  for (std::int64_t z = 1; z <= z_max; ++z) EXPECT_DOUBLE_EQ(xi(z), xi(-z)) << "z=" << z;
}

TEST(XiEngine, NamesRoundTrip) {
  for (auto e : {XiEngine::empirical, XiEngine::rational, XiEngine::irrational, XiEngine::mixing,
                 XiEngine::analytic}) {
    EXPECT_EQ(parse_xi_engine(to_string(e)), e);
  }
  EXPECT_EQ(parse_xi_engine("bogus"), std::nullopt);
}

TEST(XiEmpirical, HalfRotationTwoPointOrbit) {
  const auto map = IntervalMap::rotation(RotationNumber::rational(1, 2));
  const auto xi = xi_empirical(map, MeasureSpec::atomic_orbit(2, 0.0), Observable::identity(), 0.0,
                               4, 1000);
  // (1/(2N+1)) sum_{|n|<=N} w_n w_{n-z}: the odd n carry frac(n/2) = 1/2.
  const double odd_count = 1000.0;
  EXPECT_NEAR(xi(0), 0.25 * odd_count / 2001.0, 1e-15);
  EXPECT_NEAR(xi(0), 0.125, 1e-4);
  EXPECT_EQ(xi(1), 0.0);
  EXPECT_EQ(xi(-3), 0.0);
  expect_symmetric(xi);
}

TEST(XiEmpirical, ZeroObservable) {
  const auto xi = xi_empirical(IntervalMap::linear_mod(3), MeasureSpec::lebesgue(),
                               Observable::constant(0.0), 0.4, 5, 1000);
  for (double v : xi.values.values()) EXPECT_EQ(v, 0.0);
}

TEST(XiEmpirical, TriplingNearAnalytic) {
  OrbitOptions opts;
  opts.tail_seed = 2024;
  const auto y = sample(MeasureSpec::lebesgue(), 1, 2024)[0];
  const auto xi = xi_empirical(IntervalMap::linear_mod(3), MeasureSpec::lebesgue(),
                               Observable::identity(), y, 16, 1'000'000, opts);
  EXPECT_NEAR(xi(1), 5.0 / 36.0, 1e-2);
  const auto exact = xi_linear_mod_analytic(3, Observable::identity(), 16);
  EXPECT_LT(xi_distance(xi, exact, 16), 5e-3);
  expect_symmetric(xi);
}

TEST(XiEmpirical, Guards) {
  const auto map = IntervalMap::linear_mod(2);
  const auto f = Observable::identity();
  EXPECT_THROW((void)xi_empirical(map, MeasureSpec::lebesgue(), f, 0.3, 10, 10), WindowError);
  EXPECT_THROW((void)xi_empirical(map, MeasureSpec::lebesgue(), f, 0.3, 10, 999), WindowError);
  EXPECT_NO_THROW((void)xi_empirical(map, MeasureSpec::lebesgue(), f, 0.3, 10, 1000));
  EXPECT_THROW((void)xi_empirical(IntervalMap::rotation(RotationNumber::rational(1, 2)),
                                  MeasureSpec::atomic_orbit(2, 0.0), f, 0.25, 1, 100),
               DomainError);
}

// Rotations with Riemann-integrable f converge from every starting point,
// including ones an adversary would pick: 0, breakpoints, and points just
// left of a discontinuity.
TEST(XiEmpirical, IrrationalRotationEveryReferencePoint) {
  const double alpha = std::numbers::sqrt2 - 1.0;
  const auto map = IntervalMap::rotation(RotationNumber::irrational(alpha));
  const auto exact_id = xi_rotation_irrational(alpha, Observable::identity(), 16);
  const auto ind = Observable::indicator(0.2, 0.7);
  const auto exact_ind = xi_rotation_irrational(alpha, ind, 16);
  for (double y : {0.0, 0.2, 0.7, std::nextafter(0.2, 0.0), std::nextafter(1.0, 0.0), 0.5}) {
    const auto a = xi_empirical(map, MeasureSpec::lebesgue(), Observable::identity(), y, 16,
                                1'000'000);
    EXPECT_LT(xi_distance(a, exact_id, 16), 5e-3) << "y=" << y;
    const auto b = xi_empirical(map, MeasureSpec::lebesgue(), ind, y, 16, 1'000'000);
    EXPECT_LT(xi_distance(b, exact_ind, 16), 5e-3) << "y=" << y;
    expect_symmetric(a);
  }
}

TEST(XiRotationRational, HalfRotation) {
  const auto xi = xi_rotation_rational(1, 2, 0.0, Observable::identity(), 6);
  for (std::int64_t z = -6; z <= 6; ++z) EXPECT_DOUBLE_EQ(xi(z), z % 2 == 0 ? 0.125 : 0.0);
  EXPECT_EQ(xi.engine, XiEngine::rational);
}

TEST(XiRotationRational, ConstantOne) {
  const auto xi = xi_rotation_rational(3, 7, 0.1, Observable::constant(1.0), 10);
  for (double v : xi.values.values()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(XiRotationRational, IndicatorOnFifths) {
  const auto f = Observable::indicator(0.0, 0.4);
  const auto xi = xi_rotation_rational(1, 5, 0.0, f, 5);
  EXPECT_NEAR(xi(1), 0.2, 1e-15);
  const auto s = cyclic_samples(f, 1, 5, 0.0);
  for (std::int64_t z = -5; z <= 5; ++z) EXPECT_NEAR(xi(z), oracle::cyclic_autocorrelation(s, z), 1e-15);
  EXPECT_THROW((void)xi_rotation_rational(2, 4, 0.0, f, 3), ArgumentError);
}

TEST(XiRotationRational, GridStepMatchesIrrationalEngineOnTheOrbit) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto [p, q] = oracle::random_rational(rng, 12);
    // Step observable with breakpoints on the 1/q grid.
    std::vector<double> breaks;
    std::vector<double> values;
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (std::int64_t j = 0; j <= q; ++j) breaks.push_back(static_cast<double>(j) / static_cast<double>(q));
    for (std::int64_t j = 0; j < q; ++j) values.push_back(u(rng));
    const auto f = Observable::step(breaks, values);
    const auto a = xi_rotation_rational(p, q, 0.0, f, static_cast<std::size_t>(2 * q));
    for (std::int64_t z = -2 * q; z <= 2 * q; ++z) {
      const double t = static_cast<double>(((z * p) % q + q) % q) / static_cast<double>(q);
      EXPECT_NEAR(a(z), circle_autocorrelation(f, t), 1e-13) << p << "/" << q << " z=" << z;
    }
  }
}

TEST(XiRotationIrrational, Examples) {
  const double alpha = std::numbers::pi / 20.0;
  const auto xi = xi_rotation_irrational(alpha, Observable::identity(), 8);
  EXPECT_NEAR(xi(0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(xi(1), oracle::circle_autocorrelation(as_fn(Observable::identity()), alpha, 1 << 20),
              1e-9);
  const double len = 0.3;
  const auto ind = xi_rotation_irrational(alpha, Observable::indicator(0.0, len), 8);
  for (std::int64_t z = -8; z <= 8; ++z) {
    const double t = oracle::wrap(static_cast<double>(z) * alpha);
    EXPECT_NEAR(ind(z), std::max(len - std::min(t, 1.0 - t), 0.0), 1e-13);
  }
  expect_symmetric(xi);
}

TEST(XiMixing, TimesKAgainstAnalytic) {
  for (int k : {2, 3, 5}) {
    const auto xi = xi_mixing(IntervalMap::linear_mod(k), Observable::identity(), 8, 2048);
    for (std::int64_t z = -8; z <= 8; ++z) {
      EXPECT_NEAR(2.0 * xi(z), oracle::linear_mod_two_xi(k, static_cast<int>(std::llabs(z))), 1e-5);
    }
  }
  const auto xi2 = xi_mixing(IntervalMap::linear_mod(2), Observable::identity(), 0, 1024);
  EXPECT_NEAR(xi2(0), 1.0 / 6.0, 1e-6);
}

TEST(XiMixing, ConstantObservable) {
  const auto xi = xi_mixing(IntervalMap::linear_mod(3), Observable::constant(0.6), 5, 64);
  for (double v : xi.values.values()) EXPECT_NEAR(v, 0.18, 1e-14);
  EXPECT_THROW((void)xi_mixing(IntervalMap::rotation(RotationNumber::irrational(0.3)),
                               Observable::constant(1.0), 5, 64),
               ArgumentError);
}

TEST(XiAnalytic, ClosedFormForEveryK) {
  for (int k : {2, 3, 5, 10, 30}) {
    const auto xi = xi_linear_mod_analytic(k, Observable::identity(), 10);
    for (int n = 0; n <= 10; ++n) {
      EXPECT_NEAR(2.0 * xi(n), oracle::linear_mod_two_xi(k, n), 1e-12);
      EXPECT_DOUBLE_EQ(xi(n), xi(-n));
    }
  }
}

TEST(XiDistance, Basics) {
  const auto a = xi_rotation_rational(1, 3, 0.0, Observable::constant(0.5), 4);
  const auto b = xi_rotation_rational(1, 3, 0.0, Observable::constant(0.2), 4);
  EXPECT_EQ(xi_distance(a, a, 4), 0.0);
  EXPECT_NEAR(xi_distance(a, b, 4), 0.25 - 0.04, 1e-15);
  EXPECT_THROW((void)xi_distance(a, b, 5), DimensionError);

  const auto f = Observable::indicator(0.0, 0.4);
  const auto rat = xi_rotation_rational(1, 5, 0.0, f, 10);
  XiSequence circle{CoefficientSeq::zeros(10), XiEngine::irrational};
  for (std::int64_t z = -10; z <= 10; ++z) {
    circle.values.set(z, circle_autocorrelation(f, static_cast<double>(((z % 5) + 5) % 5) / 5.0));
  }
  EXPECT_NEAR(xi_distance(rat, circle, 10), 0.0, 1e-15);
}

// Symmetry and the Cauchy-Schwarz bound |Xi(z)| <= Xi(0) for every engine on
// random observables.
TEST(XiProperty, SymmetryAndCauchySchwarz) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const auto s = oracle::random_step(rng);
    const auto f = Observable::step(s.breaks, s.values);
    const auto [p, q] = oracle::random_rational(rng, 30);
    std::vector<XiSequence> all;
    all.push_back(xi_rotation_rational(p, q, u(rng), f, 12));
    all.push_back(xi_rotation_irrational(0.1 + 0.8 * u(rng), f, 12));
    all.push_back(xi_mixing(IntervalMap::linear_mod(2 + trial % 4), f, 12, 256));
    OrbitOptions opts;
    opts.tail_seed = static_cast<std::uint64_t>(trial);
    all.push_back(xi_empirical(IntervalMap::linear_mod(3), MeasureSpec::lebesgue(), f, u(rng), 12,
                               5000, opts));
    for (const auto& xi : all) {
      expect_symmetric(xi);
      for (std::int64_t z = -12; z <= 12; ++z) {
        EXPECT_GE(xi(z), -1e-12) << to_string(xi.engine);
        // Finite Birkhoff sums compare shifted windows, so the bound is only
        // asymptotic for the empirical engine.
        if (xi.engine != XiEngine::empirical) {
          EXPECT_LE(std::abs(xi(z)), xi(0) + 1e-12) << to_string(xi.engine);
        }
      }
    }
  }
}

}  // namespace
}  // namespace rtdiff
