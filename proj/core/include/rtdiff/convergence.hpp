#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff {

// Exact rational in lowest terms with a positive denominator. Used to check
// the rotation examples without floating point.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den = 1);

  [[nodiscard]] std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] std::int64_t den() const noexcept { return den_; }
  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Fraction operator+(const Fraction& a, const Fraction& b);
  friend Fraction operator-(const Fraction& a, const Fraction& b);
  friend Fraction operator*(const Fraction& a, const Fraction& b);
  friend bool operator==(const Fraction& a, const Fraction& b) = default;
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b);

 private:
  friend struct FractionAccess;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct RotationItem {
  RotationNumber alpha;
  double y = 0.0;  // reference point; the orbit representative w for rational alpha
  Observable f;
};

struct RotationSequenceSpec {
  RotationNumber target;
  Observable f;  // the limit observable
  std::vector<RotationItem> items;

  // alpha_i != alpha for every item (ArgumentError otherwise).
  void validate() const;
};

// Convergents p/q of alpha's continued fraction, skipping the leading 0/1.
[[nodiscard]] std::vector<std::pair<std::int64_t, std::int64_t>> continued_fraction_convergents(
    double alpha, std::size_t count);

// alpha_i = convergents of alpha, y_i = 0, f_i = f.
[[nodiscard]] RotationSequenceSpec convergent_sequence(double alpha, const Observable& f,
                                                       std::size_t count);

struct ConvergenceRow {
  std::size_t index = 0;  // 1-based
  double alpha = 0.0;
  std::int64_t q = 0;     // 0 for irrational alpha_i
  double sup_distance = 0.0;
  double f_distance = 0.0;
  // Rational items only: sup_z |A_i(frac(z alpha_i)) - Xi_i(z)| against the
  // Riemann bound 2 |f_i|_inf sum_m q^{-1} osc(f_i, [w + m/q, w + (m+1)/q)).
  std::optional<double> discretization_gap;
  std::optional<double> darboux_bound;
};

struct ConvergenceOptions {
  std::size_t f_grid = 4096;
};

// d_i = sup_{|z|<=Z} |Xi_i(z) - Xi(T_alpha, Lambda)(z)|, with Xi_i from the
// engine matching alpha_i's declared rationality and the target always the
// Lebesgue autocorrelation.
[[nodiscard]] std::vector<ConvergenceRow> xi_convergence_run(
    const RotationSequenceSpec& spec, std::size_t half_window,
    const ConvergenceOptions& options = {});

struct Example46Row {
  std::int64_t m = 0;
  Fraction continuous;
  Fraction discrete;
  double continuous_engine = 0.0;
  double discrete_engine = 0.0;
};

struct Example46Report {
  bool equal = false;      // exact values agree and the engines match them
  double engine_gap = 0.0;
  std::vector<Example46Row> rows;
};

// f = indicator of [0, r/q), alpha = p/q: the Lebesgue and eta_{q,0}
// autocorrelations coincide on Z_q.
[[nodiscard]] Example46Report example_46_check(std::int64_t r, std::int64_t q, std::int64_t p);

struct Example47Report {
  Fraction continuous_exact;  // integral of f^2
  Fraction discrete_exact;    // cyclic mean of f^2 on eta_{q,0}
  double continuous = 0.0;
  double discrete = 0.0;
  bool differ = false;
  double tent_max_error = 0.0;  // tent formula vs A(frac(z p/q)), 1 <= z < q
};

// f = indicator of [0, (2p+1)/(2q)), alpha = p/q < 1/2.
[[nodiscard]] Example47Report example_47_check(std::int64_t p, std::int64_t q);

struct DriftRow {
  std::int64_t mode = 0;
  double position1 = 0.0;
  double position2 = 0.0;
  double mass1 = 0.0;
  double mass2 = 0.0;
};

// Top-K atoms for alpha1 matched by mode with the same modes under alpha2.
[[nodiscard]] std::vector<DriftRow> diffraction_drift(double alpha1, double alpha2,
                                                      const Observable& f, std::size_t count);

}  // namespace rtdiff
