#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/convergence.hpp"
#include "rtdiff/errors.hpp"

namespace rtdiff {
namespace {

constexpr double kSilver = std::numbers::sqrt2 - 1.0;

TEST(Fraction, ReducesAndCompares) {
  EXPECT_EQ(Fraction(2, 4), Fraction(1, 2));
  EXPECT_EQ(Fraction(3, -6), Fraction(-1, 2));
  EXPECT_EQ(Fraction(1, 3) + Fraction(1, 6), Fraction(1, 2));
  EXPECT_EQ(Fraction(1, 3) - Fraction(1, 2), Fraction(-1, 6));
  EXPECT_EQ(Fraction(2, 3) * Fraction(9, 4), Fraction(3, 2));
  EXPECT_LT(Fraction(1, 3), Fraction(2, 5));
  EXPECT_EQ(Fraction(6, 4).den(), 2);
  EXPECT_THROW((void)Fraction(1, 0), ArgumentError);
}

TEST(Convergents, SilverRatioFollowsPell) {
  const auto cf = continued_fraction_convergents(kSilver, 8);
  ASSERT_EQ(cf.size(), 8u);
  // All partial quotients are 2: p_{n+1} = 2 p_n + p_{n-1}, likewise q.
  std::int64_t p0 = 0, p1 = 1, q0 = 1, q1 = 2;
  for (const auto& [p, q] : cf) {
    EXPECT_EQ(p, p1);
    EXPECT_EQ(q, q1);
    const std::int64_t p2 = 2 * p1 + p0;
    const std::int64_t q2 = 2 * q1 + q0;
    p0 = p1;
    p1 = p2;
    q0 = q1;
    q1 = q2;
  }
  EXPECT_EQ(cf.back(), (std::pair<std::int64_t, std::int64_t>{408, 985}));
}

TEST(Convergents, GoldenMeanGivesFibonacci) {
  const auto cf = continued_fraction_convergents((std::sqrt(5.0) - 1.0) / 2.0, 10);
  const std::vector<std::int64_t> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
  // 0/1 is skipped; the next is 1/1, then 1/2, 2/3, ...
  for (std::size_t i = 0; i < cf.size(); ++i) {
    EXPECT_EQ(cf[i].first, fib[i]);
    EXPECT_EQ(cf[i].second, fib[i + 1]);
  }
}

TEST(ConvergenceRun, SilverConvergents) {
  const auto spec = convergent_sequence(kSilver, Observable::identity(), 8);
  const auto rows = xi_convergence_run(spec, 32);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& row : rows) {
    EXPECT_GT(row.sup_distance, 0.0);
    EXPECT_EQ(row.f_distance, 0.0);
    ASSERT_TRUE(row.discretization_gap.has_value());
    ASSERT_TRUE(row.darboux_bound.has_value());
    EXPECT_LE(*row.discretization_gap, *row.darboux_bound + 1e-15);
  }
  for (std::size_t i = 2; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].sup_distance, rows[i - 1].sup_distance) << "i=" << i + 1;
  }
  EXPECT_LT(rows[4].sup_distance, 0.05);
  EXPECT_LT(rows[7].sup_distance, 1e-3);
}

TEST(ConvergenceRun, DistanceAgainstBruteForce) {
  // d_i recomputed from the cyclic-sum and quadrature oracles.
  const auto spec = convergent_sequence(kSilver, Observable::identity(), 4);
  const auto rows = xi_convergence_run(spec, 8);
  const oracle::Fn id = [](double x) { return x; };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& item = spec.items[i];
    std::vector<double> s;
    for (std::int64_t k = 0; k < item.alpha.q(); ++k) {
      s.push_back(static_cast<double>(k * item.alpha.p() % item.alpha.q()) /
                  static_cast<double>(item.alpha.q()));
    }
    double d = 0.0;
    for (std::int64_t z = -8; z <= 8; ++z) {
      const double target = oracle::circle_autocorrelation(id, oracle::wrap(z * kSilver), 1 << 16);
      d = std::max(d, std::abs(oracle::cyclic_autocorrelation(s, z) - target));
    }
    EXPECT_NEAR(rows[i].sup_distance, d, 1e-8);
  }
}

TEST(ConvergenceRun, IrrationalOffsetsObeyLipschitzBound) {
  RotationSequenceSpec spec{RotationNumber::irrational(kSilver), Observable::identity(), {}};
  for (int i = 1; i <= 10; ++i) {
    spec.items.push_back({RotationNumber::irrational(kSilver + 1.0 / (i + 10)), 0.0,
                          Observable::identity()});
  }
  const std::size_t z_max = 16;
  const auto rows = xi_convergence_run(spec, z_max);
  // |A(s) - A(t)| <= |f|_inf * var_circle(f) * d(s, t) with var_circle(x) = 2.
  const double lip = 2.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double bound = lip * static_cast<double>(z_max) * (1.0 / (static_cast<double>(i) + 11.0));
    EXPECT_LE(rows[i].sup_distance, bound);
    EXPECT_FALSE(rows[i].discretization_gap.has_value());
    EXPECT_EQ(rows[i].q, 0);
  }
}

TEST(ConvergenceRun, ConstantObservableHasZeroDistance) {
  const auto spec = convergent_sequence(kSilver, Observable::constant(0.8), 6);
  for (const auto& row : xi_convergence_run(spec, 10)) EXPECT_NEAR(row.sup_distance, 0.0, 1e-15);
}

TEST(ConvergenceRun, VaryingObservablesReportTheirDistance) {
  RotationSequenceSpec spec{RotationNumber::irrational(kSilver), Observable::identity(), {}};
  spec.items.push_back({RotationNumber::rational(2, 5), 0.0, Observable::polynomial({0.1, 1.0})});
  const auto rows = xi_convergence_run(spec, 4);
  EXPECT_NEAR(rows[0].f_distance, 0.1, 1e-15);
}

TEST(ConvergenceRun, RejectsTheTargetAsAnItem) {
  RotationSequenceSpec spec{RotationNumber::rational(2, 5), Observable::identity(), {}};
  spec.items.push_back({RotationNumber::rational(2, 5), 0.0, Observable::identity()});
  EXPECT_THROW(spec.validate(), ArgumentError);
  EXPECT_THROW((void)xi_convergence_run(spec, 4), ArgumentError);
  spec.items[0].alpha = RotationNumber::rational(1, 3);
  EXPECT_NO_THROW((void)xi_convergence_run(spec, 4));
  EXPECT_THROW((void)xi_convergence_run(spec, 0), ArgumentError);
}

// Darboux bound on random step observables along convergents.
TEST(ConvergenceProperty, DarbouxBoundOnRandomSteps) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const auto sd = oracle::random_step(rng);
    const auto f = Observable::step(sd.breaks, sd.values);
    const auto spec = convergent_sequence(kSilver, f, 8);
    for (const auto& row : xi_convergence_run(spec, 16)) {
      EXPECT_LE(*row.discretization_gap, *row.darboux_bound + 1e-12);
      EXPECT_LE(row.sup_distance, *row.darboux_bound + 1e-12 +
                                      xi_distance(xi_rotation_irrational(row.alpha, f, 16),
                                                  xi_rotation_irrational(kSilver, f, 16), 16));
    }
  }
}

TEST(LatticeIndicator, WorkedCases) {
  const auto a = example_46_check(2, 5, 1);
  EXPECT_TRUE(a.equal);
  ASSERT_EQ(a.rows.size(), 5u);
  EXPECT_EQ(a.rows[1].continuous, Fraction(1, 5));
  EXPECT_EQ(a.rows[1].discrete, Fraction(1, 5));

  const auto full = example_46_check(7, 7, 3);
  EXPECT_TRUE(full.equal);
  for (const auto& row : full.rows) EXPECT_EQ(row.discrete, Fraction(1));

  const auto half = example_46_check(1, 2, 1);
  EXPECT_TRUE(half.equal);
  EXPECT_EQ(half.rows[0].continuous, Fraction(1, 2));
  EXPECT_EQ(half.rows[1].continuous, Fraction(0));
  EXPECT_EQ(half.rows[0].discrete, Fraction(1, 2));
  EXPECT_EQ(half.rows[1].discrete, Fraction(0));

  EXPECT_THROW((void)example_46_check(0, 5, 1), ArgumentError);
  EXPECT_THROW((void)example_46_check(6, 5, 1), ArgumentError);
  EXPECT_THROW((void)example_46_check(2, 6, 2), ArgumentError);
}

TEST(LatticeIndicator, AllSmallDenominatorsAgainstLatticeCount) {
  for (std::int64_t q = 1; q <= 12; ++q) {
    for (std::int64_t p = 1; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (std::int64_t r = 1; r <= q; ++r) {
        const auto rep = example_46_check(r, q, p);
        EXPECT_TRUE(rep.equal) << r << "," << q << "," << p;
        EXPECT_LE(rep.engine_gap, 1e-12);
        for (const auto& row : rep.rows) {
          // Overlap of [0, r/q) with its shift by (m p mod q)/q, counted on a 1/(4q) lattice.
          const std::int64_t t = (row.m * p) % q;
          EXPECT_EQ(row.continuous, Fraction(oracle::lattice_overlap(4 * r, 4 * t, 4 * q), 4 * q));
        }
      }
    }
  }
}

TEST(HalfStepIndicator, WorkedCases) {
  const auto a = example_47_check(1, 3);
  EXPECT_EQ(a.continuous_exact, Fraction(1, 2));
  EXPECT_EQ(a.discrete_exact, Fraction(2, 3));
  EXPECT_NEAR(a.continuous, 0.5, 1e-15);
  EXPECT_NEAR(a.discrete, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(a.differ);

  const auto b = example_47_check(1, 5);
  EXPECT_EQ(b.continuous_exact, Fraction(3, 10));
  EXPECT_EQ(b.discrete_exact, Fraction(2, 5));
  EXPECT_TRUE(b.differ);

  EXPECT_THROW((void)example_47_check(1, 2), ArgumentError);
  EXPECT_THROW((void)example_47_check(2, 3), ArgumentError);
}

TEST(HalfStepIndicator, AllSmallDenominatorsAgainstBruteForce) {
  for (std::int64_t q = 3; q <= 12; ++q) {
    for (std::int64_t p = 1; 2 * p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const auto rep = example_47_check(p, q);
      const double len = (2.0 * p + 1.0) / (2.0 * q);
      const oracle::Fn f = [len](double x) { return x < len ? 1.0 : 0.0; };
      EXPECT_NEAR(rep.continuous, oracle::midpoint([&](double x) { return f(x) * f(x); }, 1 << 18),
                  1e-5);
      std::vector<double> s;
      for (std::int64_t k = 0; k < q; ++k) s.push_back(f(static_cast<double>(k * p % q) / q));
      EXPECT_NEAR(rep.discrete, oracle::cyclic_autocorrelation(s, 0), 1e-15);
      EXPECT_EQ(rep.discrete_exact, Fraction(p + 1, q));
      EXPECT_TRUE(rep.differ) << p << "/" << q;
      EXPECT_LT(rep.tent_max_error, 1e-12);
      for (std::int64_t z = 1; z < q; ++z) {
        const double t = static_cast<double>(z * p % q) / q;
        EXPECT_NEAR(std::max(0.0, len - std::min(t, 1.0 - t)),
                    oracle::circle_autocorrelation(f, t, 1 << 16), 1e-4);
      }
    }
  }
}

TEST(Drift, TopFiftyAtTwoAngles) {
  const double a1 = std::numbers::pi / 20.0;
  const double a2 = 103.0 * std::numbers::pi / 2000.0;
  const auto rows = diffraction_drift(a1, a2, Observable::identity(), 50);
  ASSERT_EQ(rows.size(), 50u);
  EXPECT_EQ(rows[0].mode, 0);
  EXPECT_NEAR(rows[0].mass1, 0.25, 1e-15);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.mass1, row.mass2, 1e-12);
    EXPECT_LE(circle_distance(row.position1, row.position2),
              static_cast<double>(std::llabs(row.mode)) * 3.0 * std::numbers::pi / 2000.0 + 1e-12);
  }
  for (const auto& row : diffraction_drift(a1, a1, Observable::identity(), 20)) {
    EXPECT_EQ(row.position1, row.position2);
  }
}

}  // namespace
}  // namespace rtdiff
