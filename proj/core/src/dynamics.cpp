#include "rtdiff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rtdiff/errors.hpp"
#include "wide_int.hpp"

namespace rtdiff {

namespace {

using u128 = detail::uint128;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_unit_point(double y) {
  if (!std::isfinite(y) || y < 0.0 || y >= 1.0) {
    throw DomainError("reference point must lie in [0, 1), got " + std::to_string(y));
  }
}

// y * 2^64 truncated; exact for y >= 2^-11.
std::uint64_t to_fixed(double y) {
  return static_cast<std::uint64_t>(std::ldexp(y, 64));
}

double from_fixed(std::uint64_t x) {
  return static_cast<double>(x >> 11) * kTwoPow53Inv;
}

std::uint64_t pow_wrap(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

// Streams the base-k expansion of a point: the digits of y a double resolves,
// then i.i.d. uniform digits.
class DigitSource {
 public:
  DigitSource(double y, int k, std::uint64_t seed)
      : fixed_(to_fixed(y)), k_(static_cast<std::uint64_t>(k)), rng_(seed), uniform_(0, k_ - 1) {
    exact_digits_ = static_cast<int>(std::floor(52.0 / std::log2(static_cast<double>(k))));
  }

  std::uint64_t next() {
    if (exact_digits_ > 0) {
      --exact_digits_;
      const u128 scaled = static_cast<u128>(fixed_) * k_;
      fixed_ = static_cast<std::uint64_t>(scaled);
      return static_cast<std::uint64_t>(scaled >> 64);
    }
    return uniform_(rng_);
  }

 private:
  std::uint64_t fixed_;
  std::uint64_t k_;
  int exact_digits_ = 0;
  std::mt19937_64 rng_;
  std::uniform_int_distribution<std::uint64_t> uniform_;
};

std::vector<double> linear_mod_orbit_random_tail(int k, double y, std::int64_t first,
                                                 std::size_t count, std::uint64_t seed) {
  DigitSource digits(y, k, seed);
  const auto base = static_cast<u128>(k);
  // Widest window with k^width < 2^124.
  int width = 0;
  u128 top = 1;
  while (top <= (static_cast<u128>(1) << 124) / base) {
    top *= base;
    ++width;
  }
  const u128 modulus = top / base;
  u128 window = 0;
  for (int i = 0; i < width; ++i) window = window * base + digits.next();

  const long double scale = static_cast<long double>(top);
  const double below_one = std::nextafter(1.0, 0.0);
  auto value = [&] {
    const double x = static_cast<double>(static_cast<long double>(window) / scale);
    return std::min(x, below_one);
  };
  auto step = [&] { window = (window % modulus) * base + digits.next(); };

  for (std::int64_t i = 0; i < first; ++i) step();
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(value());
    step();
  }
  return out;
}

double piecewise_step(const PiecewiseMonotone& pm, double x) {
  auto it = std::upper_bound(pm.branches.begin(), pm.branches.end(), x,
                             [](double v, const Branch& b) { return v < b.upper; });
  if (it == pm.branches.end()) it = std::prev(pm.branches.end());
  return frac(it->map(x));
}

}  // namespace

double frac(double x) noexcept {
  const double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b) noexcept {
  const double d = frac(a - b);
  return std::min(d, 1.0 - d);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) noexcept {
  return std::gcd(a, b);
}

RotationNumber RotationNumber::irrational(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ArgumentError("rotation number must be positive and finite");
  }
  return RotationNumber(alpha, 0, 0);
}

RotationNumber RotationNumber::rational(std::int64_t p, std::int64_t q) {
  if (q < 1 || p < 1) throw ArgumentError("rational rotation number needs p >= 1 and q >= 1");
  if (std::gcd(p, q) != 1) {
    throw ArgumentError("rotation number " + std::to_string(p) + "/" + std::to_string(q) +
                        " is not in lowest terms");
  }
  return RotationNumber(static_cast<double>(p) / static_cast<double>(q), p, q);
}

double RotationNumber::multiple(std::int64_t n) const noexcept {
  if (is_rational()) {
    const std::int64_t nq = ((n % q_) + q_) % q_;
    const auto r = static_cast<std::int64_t>((static_cast<detail::int128>(nq) * p_) % q_);
    return static_cast<double>(r) / static_cast<double>(q_);
  }
  return frac(static_cast<double>(n) * value_);
}

Branch Branch::affine(double lower, double upper, double slope, double intercept) {
  Branch b;
  b.lower = lower;
  b.upper = upper;
  b.slope = slope;
  b.intercept = intercept;
  b.map = [slope, intercept](double x) { return slope * x + intercept; };
  b.derivative = [slope](double) { return slope; };
  return b;
}

Branch Branch::general(double lower, double upper, std::function<double(double)> map,
                       std::function<double(double)> derivative) {
  Branch b;
  b.lower = lower;
  b.upper = upper;
  b.map = std::move(map);
  b.derivative = std::move(derivative);
  return b;
}

IntervalMap IntervalMap::rotation(RotationNumber alpha) {
  return IntervalMap(RigidRotation{alpha});
}

IntervalMap IntervalMap::linear_mod(int k) {
  if (k < 2) throw ArgumentError("linear_mod needs k >= 2");
  return IntervalMap(LinearMod{k});
}

IntervalMap IntervalMap::piecewise(std::vector<Branch> branches) {
  if (branches.empty()) throw ArgumentError("piecewise map needs at least one branch");
  if (branches.front().lower != 0.0 || branches.back().upper != 1.0) {
    throw ArgumentError("piecewise branches must cover [0, 1)");
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Branch& b = branches[i];
    if (!(b.lower < b.upper)) throw ArgumentError("branch interval must be non-empty");
    if (i + 1 < branches.size() && b.upper != branches[i + 1].lower) {
      throw ArgumentError("piecewise branches must be contiguous");
    }
    if (!b.map || !b.derivative) throw ArgumentError("branch needs a map and a derivative");
  }
  return IntervalMap(PiecewiseMonotone{std::move(branches)});
}

bool IntervalMap::invertible() const noexcept {
  return std::holds_alternative<RigidRotation>(variant_);
}

const RigidRotation* IntervalMap::as_rotation() const noexcept {
  return std::get_if<RigidRotation>(&variant_);
}

const LinearMod* IntervalMap::as_linear_mod() const noexcept {
  return std::get_if<LinearMod>(&variant_);
}

const PiecewiseMonotone* IntervalMap::as_piecewise() const noexcept {
  return std::get_if<PiecewiseMonotone>(&variant_);
}

double IntervalMap::operator()(double x) const {
  return std::visit(
      overloaded{
          [x](const RigidRotation& r) { return frac(x + r.alpha.value()); },
          [x](const LinearMod& m) { return frac(static_cast<double>(m.k) * x); },
          [x](const PiecewiseMonotone& pm) { return piecewise_step(pm, x); },
      },
      variant_);
}

std::string IntervalMap::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&os](const RigidRotation& r) {
                   if (r.alpha.is_rational()) {
                     os << "rotation " << r.alpha.p() << "/" << r.alpha.q();
                   } else {
                     os << "rotation " << r.alpha.value();
                   }
                 },
                 [&os](const LinearMod& m) { os << "linear_mod " << m.k; },
                 [&os](const PiecewiseMonotone& pm) {
                   os << "piecewise_monotone " << pm.branches.size() << " branches";
                 },
             },
             variant_);
  return os.str();
}

double iterate(const IntervalMap& map, double y, std::int64_t n) {
  check_unit_point(y);
  if (const auto* rot = map.as_rotation()) {
    if (rot->alpha.is_rational()) return frac(y + rot->alpha.multiple(n));
    return frac(std::fma(static_cast<double>(n), rot->alpha.value(), y));
  }
  if (n < 0) throw DomainError("negative iteration count on a non-invertible map");
  if (const auto* lm = map.as_linear_mod()) {
    const std::uint64_t factor = pow_wrap(static_cast<std::uint64_t>(lm->k),
                                          static_cast<std::uint64_t>(n));
    return from_fixed(to_fixed(y) * factor);
  }
  double x = y;
  for (std::int64_t i = 0; i < n; ++i) x = map(x);
  return x;
}

std::vector<double> orbit(const IntervalMap& map, double y, std::int64_t first, std::size_t count,
                          const OrbitOptions& options) {
  check_unit_point(y);
  std::vector<double> out;
  out.reserve(count);
  if (map.invertible()) {
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(iterate(map, y, first + static_cast<std::int64_t>(i)));
    }
    return out;
  }
  if (first < 0) throw DomainError("negative iteration count on a non-invertible map");
  if (const auto* lm = map.as_linear_mod()) {
    if (options.tail_seed) {
      return linear_mod_orbit_random_tail(lm->k, y, first, count, *options.tail_seed);
    }
    const auto k = static_cast<std::uint64_t>(lm->k);
    std::uint64_t x = to_fixed(y) * pow_wrap(k, static_cast<std::uint64_t>(first));
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(from_fixed(x));
      x *= k;
    }
    return out;
  }
  double x = iterate(map, y, first);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(x);
    x = map(x);
  }
  return out;
}

MeasureSpec MeasureSpec::lebesgue() {
  return MeasureSpec(Lebesgue{});
}

MeasureSpec MeasureSpec::atomic_orbit(std::int64_t q, double w) {
  if (q < 1) throw ArgumentError("atomic orbit measure needs q >= 1");
  if (!std::isfinite(w) || w < 0.0 || w >= 1.0) {
    throw ArgumentError("atomic orbit offset w must lie in [0, 1)");
  }
  return MeasureSpec(AtomicOrbit{q, w});
}

MeasureSpec MeasureSpec::stationary(std::vector<double> density) {
  if (density.empty()) throw ArgumentError("stationary density needs at least one cell");
  double total = 0.0;
  for (double v : density) {
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("density must be finite and >= 0");
    total += v;
  }
  if (total <= 0.0) throw ArgumentError("density has zero mass");
  const double mean = total / static_cast<double>(density.size());
  for (double& v : density) v /= mean;
  return MeasureSpec(TransferStationary{std::move(density)});
}

std::vector<double> MeasureSpec::atoms() const {
  const auto* atomic = std::get_if<AtomicOrbit>(&variant_);
  if (atomic == nullptr) return {};
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(atomic->q));
  for (std::int64_t k = 0; k < atomic->q; ++k) {
    out.push_back(frac(atomic->w + static_cast<double>(k) / static_cast<double>(atomic->q)));
  }
  return out;
}

bool MeasureSpec::in_support(double y, double tolerance) const {
  if (!std::isfinite(y) || y < 0.0 || y >= 1.0) return false;
  if (std::holds_alternative<AtomicOrbit>(variant_)) {
    const auto pts = atoms();
    return std::any_of(pts.begin(), pts.end(),
                       [&](double a) { return circle_distance(a, y) <= tolerance; });
  }
  if (const auto* st = std::get_if<TransferStationary>(&variant_)) {
    const auto n = st->density.size();
    const auto cell = std::min(n - 1, static_cast<std::size_t>(y * static_cast<double>(n)));
    return st->density[cell] > 0.0;
  }
  return true;
}

std::vector<double> sample(const MeasureSpec& measure, std::size_t count,
                           std::mt19937_64& generator) {
  std::vector<double> out;
  out.reserve(count);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::visit(overloaded{
                 [&](const Lebesgue&) {
                   for (std::size_t i = 0; i < count; ++i) out.push_back(frac(unit(generator)));
                 },
                 [&](const AtomicOrbit& a) {
                   std::uniform_int_distribution<std::int64_t> pick(0, a.q - 1);
                   for (std::size_t i = 0; i < count; ++i) {
                     const auto k = pick(generator);
                     out.push_back(frac(a.w + static_cast<double>(k) / static_cast<double>(a.q)));
                   }
                 },
                 [&](const TransferStationary& s) {
                   std::discrete_distribution<std::size_t> cell(s.density.begin(),
                                                                 s.density.end());
                   const auto n = static_cast<double>(s.density.size());
                   for (std::size_t i = 0; i < count; ++i) {
                     const auto c = static_cast<double>(cell(generator));
                     out.push_back(frac((c + unit(generator)) / n));
                   }
                 },
             },
             measure.variant());
  return out;
}

std::vector<double> sample(const MeasureSpec& measure, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 generator(seed);
  return sample(measure, count, generator);
}

}  // namespace rtdiff
