#include "rtdiff/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>

#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/diffraction.hpp"
#include "rtdiff/errors.hpp"
#include "wide_int.hpp"

namespace rtdiff {

struct FractionAccess {
  static Fraction make(std::int64_t num, std::int64_t den) {
    Fraction f;
    f.num_ = num;
    f.den_ = den;
    return f;
  }
};

namespace {

Fraction from_wide(detail::int128 num, detail::int128 den) {
  if (den == 0) throw ArgumentError("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  detail::int128 a = num < 0 ? -num : num;
  detail::int128 b = den;
  while (b != 0) {
    const detail::int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr detail::int128 kLimit = std::numeric_limits<std::int64_t>::max();
  if (num > kLimit || -num > kLimit || den > kLimit) {
    throw ArgumentError("fraction overflows 64-bit integers");
  }
  return FractionAccess::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Fraction max0(const Fraction& a) {
  return a.num() > 0 ? a : Fraction(0);
}

// |[0, a) ∩ ([0, a) + t)| on the circle, 0 <= t < 1, 0 <= a <= 1.
Fraction interval_overlap(const Fraction& a, const Fraction& t) {
  return max0(a - t) + max0(t + a - Fraction(1));
}

XiSequence item_xi(const RotationItem& item, std::size_t half_window) {
  if (item.alpha.is_rational()) {
    return xi_rotation_rational(item.alpha.p(), item.alpha.q(), item.y, item.f, half_window);
  }
  return xi_rotation_irrational(item.alpha.value(), item.f, half_window);
}

double darboux_bound(const Observable& f, std::int64_t q, double w) {
  double total = 0.0;
  const double qd = static_cast<double>(q);
  for (std::int64_t m = 0; m < q; ++m) {
    const double a = frac(w + static_cast<double>(m) / qd);
    const double b = a + 1.0 / qd;
    double lo = 0.0;
    double hi = 0.0;
    if (b <= 1.0) {
      std::tie(lo, hi) = f.range_over(a, b);
    } else {
      const auto [lo1, hi1] = f.range_over(a, 1.0);
      const auto [lo2, hi2] = f.range_over(0.0, std::min(1.0, b - 1.0));
      lo = std::min(lo1, lo2);
      hi = std::max(hi1, hi2);
    }
    total += (hi - lo) / qd;
  }
  return 2.0 * f.sup_norm() * total;
}

}  // namespace

Fraction::Fraction(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Fraction operator+(const Fraction& a, const Fraction& b) {
  using detail::int128;
  return from_wide(static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
                   static_cast<int128>(a.den_) * b.den_);
}

Fraction operator-(const Fraction& a, const Fraction& b) {
  using detail::int128;
  return from_wide(static_cast<int128>(a.num_) * b.den_ - static_cast<int128>(b.num_) * a.den_,
                   static_cast<int128>(a.den_) * b.den_);
}

Fraction operator*(const Fraction& a, const Fraction& b) {
  using detail::int128;
  return from_wide(static_cast<int128>(a.num_) * b.num_, static_cast<int128>(a.den_) * b.den_);
}

std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
  const detail::int128 lhs = static_cast<detail::int128>(a.num_) * b.den_;
  const detail::int128 rhs = static_cast<detail::int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void RotationSequenceSpec::validate() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const RotationNumber& a = items[i].alpha;
    const bool same = a.is_rational() && target.is_rational()
                          ? a.p() == target.p() && a.q() == target.q()
                          : a.is_rational() == target.is_rational() && a.value() == target.value();
    if (same) {
      throw ArgumentError("item " + std::to_string(i + 1) + " repeats the target rotation number");
    }
  }
}

std::vector<std::pair<std::int64_t, std::int64_t>> continued_fraction_convergents(
    double alpha, std::size_t count) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw ArgumentError("continued fraction needs a positive finite alpha");
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t p_prev = 1, p_prev2 = 0;
  std::int64_t q_prev = 0, q_prev2 = 1;
  double x = alpha;
  constexpr double kMaxDenominator = 1e15;
  while (out.size() < count) {
    const double a_d = std::floor(x);
    if (a_d > kMaxDenominator) break;
    const auto a = static_cast<std::int64_t>(a_d);
    const std::int64_t p = a * p_prev + p_prev2;
    const std::int64_t q = a * q_prev + q_prev2;
    if (static_cast<double>(q) > kMaxDenominator) break;
    if (p >= 1) out.emplace_back(p, q);
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    const double rest = x - a_d;
    if (rest <= 0.0) break;
    x = 1.0 / rest;
  }
  if (out.size() < count) {
    throw ArgumentError("alpha has only " + std::to_string(out.size()) +
                        " resolvable convergents; " + std::to_string(count) + " requested");
  }
  return out;
}

RotationSequenceSpec convergent_sequence(double alpha, const Observable& f, std::size_t count) {
  RotationSequenceSpec spec{RotationNumber::irrational(alpha), f, {}};
  for (const auto& [p, q] : continued_fraction_convergents(alpha, count)) {
    spec.items.push_back({RotationNumber::rational(p, q), 0.0, f});
  }
  return spec;
}

std::vector<ConvergenceRow> xi_convergence_run(const RotationSequenceSpec& spec,
                                               std::size_t half_window,
                                               const ConvergenceOptions& options) {
  if (half_window < 1) throw ArgumentError("convergence run needs Z >= 1");
  spec.validate();
  const XiSequence target = xi_rotation_irrational(spec.target.value(), spec.f, half_window);

  std::vector<ConvergenceRow> rows;
  rows.reserve(spec.items.size());
  for (std::size_t i = 0; i < spec.items.size(); ++i) {
    const RotationItem& item = spec.items[i];
    const XiSequence xi = item_xi(item, half_window);
    ConvergenceRow row;
    row.index = i + 1;
    row.alpha = item.alpha.value();
    row.q = item.alpha.q();
    row.sup_distance = xi_distance(xi, target, half_window);
    row.f_distance = sup_distance(item.f, spec.f, options.f_grid);
    if (item.alpha.is_rational()) {
      double gap = 0.0;
      for (std::int64_t z = 0; z <= static_cast<std::int64_t>(half_window); ++z) {
        const double continuous = circle_autocorrelation(item.f, item.alpha.multiple(z));
        gap = std::max(gap, std::abs(continuous - xi(z)));
      }
      row.discretization_gap = gap;
      row.darboux_bound = darboux_bound(item.f, item.alpha.q(), item.y);
    }
    rows.push_back(row);
  }
  return rows;
}

Example46Report example_46_check(std::int64_t r, std::int64_t q, std::int64_t p) {
  if (q < 1 || r < 1 || r > q) throw ArgumentError("indicator [0, r/q) check needs 1 <= r <= q");
  const RotationNumber alpha = RotationNumber::rational(p, q);
  const Fraction a(r, q);
  const Observable f =
      r == q ? Observable::constant(1.0)
             : Observable::indicator(0.0, static_cast<double>(r) / static_cast<double>(q));
  const XiSequence discrete_engine =
      xi_rotation_rational(alpha.p(), alpha.q(), 0.0, f, static_cast<std::size_t>(q));

  Example46Report report;
  report.equal = true;
  for (std::int64_t m = 0; m < q; ++m) {
    const auto shift = static_cast<std::int64_t>((static_cast<detail::int128>(m) * p) % q);
    Example46Row row;
    row.m = m;
    row.continuous = interval_overlap(a, Fraction(shift, q));
    // s_l = [l p mod q < r]; count l with s_{l-m} s_l = 1.
    std::int64_t hits = 0;
    for (std::int64_t l = 0; l < q; ++l) {
      const auto cur = static_cast<std::int64_t>((static_cast<detail::int128>(l) * p) % q);
      const std::int64_t prev = ((cur - shift) % q + q) % q;
      if (cur < r && prev < r) ++hits;
    }
    row.discrete = Fraction(hits, q);
    row.continuous_engine = circle_autocorrelation(f, alpha.multiple(m));
    row.discrete_engine = discrete_engine(m);
    report.engine_gap = std::max({report.engine_gap,
                                  std::abs(row.continuous_engine - row.continuous.to_double()),
                                  std::abs(row.discrete_engine - row.discrete.to_double())});
    report.equal = report.equal && row.continuous == row.discrete;
    report.rows.push_back(row);
  }
  constexpr double kEngineTolerance = 1e-12;
  report.equal = report.equal && report.engine_gap <= kEngineTolerance;
  return report;
}

Example47Report example_47_check(std::int64_t p, std::int64_t q) {
  if (p < 1 || q < 1 || 2 * p >= q) {
    throw ArgumentError("indicator [0, (2p+1)/(2q)) check needs 1 <= p and p/q < 1/2");
  }
  const RotationNumber alpha = RotationNumber::rational(p, q);
  const Fraction length(2 * p + 1, 2 * q);
  const Observable f = Observable::indicator(0.0, length.to_double());

  Example47Report report;
  report.continuous_exact = length;
  std::int64_t inside = 0;
  for (std::int64_t k = 0; k < q; ++k) {
    if (Fraction(k, q) < length) ++inside;
  }
  report.discrete_exact = Fraction(inside, q);
  report.continuous = circle_autocorrelation(f, 0.0);
  const std::vector<double> s = cyclic_samples(f, alpha.p(), alpha.q(), 0.0);
  double sum = 0.0;
  for (double v : s) sum += v * v;
  report.discrete = sum / static_cast<double>(q);
  report.differ = report.continuous_exact != report.discrete_exact &&
                  report.continuous != report.discrete;

  const double l = length.to_double();
  for (std::int64_t z = 1; z < q; ++z) {
    const double t = alpha.multiple(z);
    const double tent = std::max(0.0, l - circle_distance(t, 0.0));
    report.tent_max_error =
        std::max(report.tent_max_error, std::abs(tent - circle_autocorrelation(f, t)));
  }
  return report;
}

std::vector<DriftRow> diffraction_drift(double alpha1, double alpha2, const Observable& f,
                                        std::size_t count) {
  if (count < 1) throw ArgumentError("drift table needs K >= 1");
  const auto modes = static_cast<std::int64_t>(count);
  const DiffractionSpectrum s1 = rotation_diffraction_irrational(alpha1, f, modes);
  const DiffractionSpectrum s2 = rotation_diffraction_irrational(alpha2, f, modes);
  std::unordered_map<std::int64_t, const Atom*> by_mode;
  for (const Atom& a : s2.atoms) by_mode.emplace(a.mode, &a);

  const RotationNumber r2 = RotationNumber::irrational(alpha2);
  std::vector<DriftRow> rows;
  for (const Atom& a : top_atoms(s1, count).atoms) {
    DriftRow row{a.mode, a.position, r2.multiple(a.mode), a.mass, 0.0};
    if (const auto it = by_mode.find(a.mode); it != by_mode.end()) {
      row.position2 = it->second->position;
      row.mass2 = it->second->mass;
    } else {
      row.mass2 = std::norm(fourier_coefficient(f, a.mode));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rtdiff
