#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace rtdiff {

// Fractional part x - floor(x), always in [0, 1).
[[nodiscard]] double frac(double x) noexcept;

// Distance on the circle R/Z between two points.
[[nodiscard]] double circle_distance(double a, double b) noexcept;

[[nodiscard]] std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept;

// A rotation number whose rationality is declared by the caller. A rational
// rotation number stores its reduced fraction p/q; the double is p/q rounded.
class RotationNumber {
 public:
  // Declares alpha irrational. Requires alpha > 0 and finite.
  static RotationNumber irrational(double alpha);
  // Declares alpha = p/q. Requires p >= 1, q >= 1 and gcd(p, q) == 1.
  static RotationNumber rational(std::int64_t p, std::int64_t q);

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] bool is_rational() const noexcept { return q_ != 0; }
  [[nodiscard]] std::int64_t p() const noexcept { return p_; }
  // Zero for irrational rotation numbers.
  [[nodiscard]] std::int64_t q() const noexcept { return q_; }

  // frac(n * alpha); exact modular arithmetic for rational alpha.
  [[nodiscard]] double multiple(std::int64_t n) const noexcept;

 private:
  RotationNumber(double value, std::int64_t p, std::int64_t q) : value_(value), p_(p), q_(q) {}

  double value_;
  std::int64_t p_;
  std::int64_t q_;
};

struct RigidRotation {
  RotationNumber alpha;
};

struct LinearMod {
  int k;
};

// One monotone branch of a piecewise monotone map, defined on [lower, upper).
// The branch map must send its interval into [0, 1]; images equal to 1 are
// reduced to 0.
struct Branch {
  double lower = 0.0;
  double upper = 1.0;
  std::function<double(double)> map;
  std::function<double(double)> derivative;
  // Set for affine branches x -> slope * x + intercept; enables exact Ulam entries.
  std::optional<double> slope;
  std::optional<double> intercept;

  static Branch affine(double lower, double upper, double slope, double intercept);
  static Branch general(double lower, double upper, std::function<double(double)> map,
                        std::function<double(double)> derivative);

  [[nodiscard]] bool is_affine() const noexcept { return slope.has_value(); }
};

struct PiecewiseMonotone {
  std::vector<Branch> branches;
};

class IntervalMap {
 public:
  using Variant = std::variant<RigidRotation, LinearMod, PiecewiseMonotone>;

  static IntervalMap rotation(RotationNumber alpha);
  static IntervalMap linear_mod(int k);
  // Branches must be sorted and partition [0, 1).
  static IntervalMap piecewise(std::vector<Branch> branches);

  [[nodiscard]] bool invertible() const noexcept;
  [[nodiscard]] const Variant& variant() const noexcept { return variant_; }
  [[nodiscard]] const RigidRotation* as_rotation() const noexcept;
  [[nodiscard]] const LinearMod* as_linear_mod() const noexcept;
  [[nodiscard]] const PiecewiseMonotone* as_piecewise() const noexcept;

  // One application of the map.
  [[nodiscard]] double operator()(double x) const;

  [[nodiscard]] std::string describe() const;

 private:
  explicit IntervalMap(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

// T^n(y). Negative n only for invertible maps (DomainError otherwise).
// Rotations use frac(y + n*alpha) directly; LinearMod uses exact 64-bit
// fixed-point arithmetic on the binary expansion of y.
[[nodiscard]] double iterate(const IntervalMap& map, double y, std::int64_t n);

struct OrbitOptions {
  // For LinearMod maps: keep the leading base-k digits of y that a double
  // resolves and continue its expansion with digits drawn from this seed.
  // This follows a Lebesgue-typical point next to y instead of the exact
  // (eventually periodic, for even k eventually zero) orbit of the dyadic y.
  std::optional<std::uint64_t> tail_seed;
};

// T^first(y), ..., T^(first+count-1)(y).
[[nodiscard]] std::vector<double> orbit(const IntervalMap& map, double y, std::int64_t first,
                                        std::size_t count, const OrbitOptions& options = {});

struct Lebesgue {};

// eta_{q,w} = q^{-1} sum_k delta_{frac(w + k/q)}.
struct AtomicOrbit {
  std::int64_t q = 1;
  double w = 0.0;
};

// Piecewise constant density on a uniform partition of [0,1), mean 1.
struct TransferStationary {
  std::vector<double> density;
};

class MeasureSpec {
 public:
  using Variant = std::variant<Lebesgue, AtomicOrbit, TransferStationary>;

  static MeasureSpec lebesgue();
  static MeasureSpec atomic_orbit(std::int64_t q, double w);
  // Renormalizes the density to mean 1; entries must be >= 0.
  static MeasureSpec stationary(std::vector<double> density);

  [[nodiscard]] const Variant& variant() const noexcept { return variant_; }

  // The q atom positions of an AtomicOrbit measure, in orbit order of k/q.
  [[nodiscard]] std::vector<double> atoms() const;

  [[nodiscard]] bool in_support(double y, double tolerance = 1e-12) const;

 private:
  explicit MeasureSpec(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

// i.i.d. draws from the measure with a caller-owned generator.
[[nodiscard]] std::vector<double> sample(const MeasureSpec& measure, std::size_t count,
                                         std::mt19937_64& generator);
[[nodiscard]] std::vector<double> sample(const MeasureSpec& measure, std::size_t count,
                                         std::uint64_t seed);

}  // namespace rtdiff
