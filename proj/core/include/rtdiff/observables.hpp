#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rtdiff/dynamics.hpp"

namespace rtdiff {

// Composite midpoint panels used whenever no closed form exists.
inline constexpr std::size_t kQuadraturePanels = std::size_t{1} << 16;

// Piecewise constant on right-open intervals [breaks[i], breaks[i+1]),
// zero outside [breaks.front(), breaks.back()).
struct Step {
  std::vector<double> breaks;
  std::vector<double> values;
};

// sum_j coefficients[j] * x^j.
struct Polynomial {
  std::vector<double> coefficients;
};

// Samples at the nodes j/(n-1), linearly interpolated.
struct Tabulated {
  std::vector<double> samples;
};

// A non-negative, bounded, Riemann-integrable observable on [0, 1).
// Step and Polynomial observables get exact closed forms everywhere;
// Tabulated observables fall back to midpoint quadrature.
class Observable {
 public:
  using Variant = std::variant<Step, Polynomial, Tabulated>;

  static Observable identity();
  static Observable constant(double value);
  // Indicator of [a, b) with 0 <= a < b <= 1.
  static Observable indicator(double a, double b);
  static Observable step(std::vector<double> breaks, std::vector<double> values);
  static Observable polynomial(std::vector<double> coefficients);
  static Observable tabulated(std::vector<double> samples);

  [[nodiscard]] double operator()(double x) const;

  [[nodiscard]] const Variant& variant() const noexcept { return variant_; }
  [[nodiscard]] bool has_closed_form() const noexcept {
    return !std::holds_alternative<Tabulated>(variant_);
  }

  // Metadata only; the variation is never computed.
  [[nodiscard]] std::optional<double> declared_bounded_variation() const noexcept {
    return declared_variation_;
  }
  [[nodiscard]] Observable with_declared_variation(double variation) const;

  // integral of f over [a, b], 0 <= a <= b <= 1.
  [[nodiscard]] double integral_over(double a, double b) const;
  // integral of f^2 over [a, b].
  [[nodiscard]] double square_integral_over(double a, double b) const;
  // integral of (x - (a + b)/2) f(x) over [a, b].
  [[nodiscard]] double centered_moment_over(double a, double b) const;

  // (inf, sup) of f over [a, b] (right limits at breakpoints).
  [[nodiscard]] std::pair<double, double> range_over(double a, double b) const;
  [[nodiscard]] double sup_norm() const;

 private:
  explicit Observable(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
  std::optional<double> declared_variation_;
};

// integral f d(measure); exact for closed-form observables.
[[nodiscard]] double integrate(const Observable& f, const MeasureSpec& measure);
// integral f^2 d(measure).
[[nodiscard]] double integrate_square(const Observable& f, const MeasureSpec& measure);

// A(t) = integral_0^1 f(frac(x - t)) f(x) dx. Even in t on the circle.
[[nodiscard]] double circle_autocorrelation(const Observable& f, double t);

// f^(m) = integral_0^1 f(x) exp(-2 pi i m x) dx.
[[nodiscard]] std::complex<double> fourier_coefficient(const Observable& f, std::int64_t m);

// Entry k is f(frac(y + k p/q)): f sampled along the orbit of y under T_{p/q}.
[[nodiscard]] std::vector<double> cyclic_samples(const Observable& f, std::int64_t p,
                                                 std::int64_t q, double y);

// max |a(x) - b(x)| over the midpoints and left endpoints of `grid` cells.
[[nodiscard]] double sup_distance(const Observable& a, const Observable& b,
                                  std::size_t grid = 4096);

}  // namespace rtdiff
