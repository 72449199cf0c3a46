#include "rtdiff/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rtdiff/errors.hpp"
#include "wide_int.hpp"

namespace rtdiff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Coefficients = std::vector<double>;

// Polynomial in absolute x restricted to [a, b).
struct Piece {
  double a;
  double b;
  Coefficients c;
};

double horner(const Coefficients& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Coefficients multiply(const Coefficients& lhs, const Coefficients& rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  Coefficients out(lhs.size() + rhs.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
  }
  return out;
}

Coefficients derivative(const Coefficients& c) {
  if (c.size() <= 1) return {};
  Coefficients out(c.size() - 1);
  for (std::size_t j = 1; j < c.size(); ++j) out[j - 1] = c[j] * static_cast<double>(j);
  return out;
}

// integral_lo^hi p(x) dx from the antiderivative x * sum c_j x^j / (j+1).
double definite_integral(const Coefficients& c, double lo, double hi) {
  if (c.empty() || !(hi > lo)) return 0.0;
  auto antiderivative = [&](double x) {
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * x + c[j] / static_cast<double>(j + 1);
    return acc * x;
  };
  return antiderivative(hi) - antiderivative(lo);
}

// Coefficients of p(x - s).
Coefficients shifted(const Coefficients& c, double s) {
  const std::size_t n = c.size();
  Coefficients out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // (x - s)^i = sum_j C(i, j) x^j (-s)^(i-j)
    double binom = 1.0;
    double power = 1.0;  // (-s)^(i-j), built from j = i downwards
    for (std::size_t j = i + 1; j-- > 0;) {
      out[j] += c[i] * binom * power;
      binom = binom * static_cast<double>(j) / static_cast<double>(i - j + 1);
      power *= -s;
    }
  }
  return out;
}

std::vector<Piece> pieces_of(const Observable::Variant& v) {
  std::vector<Piece> out;
  if (const auto* step = std::get_if<Step>(&v)) {
    for (std::size_t i = 0; i < step->values.size(); ++i) {
      if (step->values[i] != 0.0) {
        out.push_back({step->breaks[i], step->breaks[i + 1], {step->values[i]}});
      }
    }
  } else if (const auto* poly = std::get_if<Polynomial>(&v)) {
    out.push_back({0.0, 1.0, poly->coefficients});
  }
  return out;
}

double tabulated_value(const Tabulated& t, double x) {
  const auto n = t.samples.size();
  const double u = std::clamp(x, 0.0, 1.0) * static_cast<double>(n - 1);
  const auto j = std::min(static_cast<std::size_t>(u), n - 2);
  const double s = u - static_cast<double>(j);
  return t.samples[j] + s * (t.samples[j + 1] - t.samples[j]);
}

template <class F>
double midpoint(F&& g, double a, double b) {
  if (!(b > a)) return 0.0;
  const auto panels = std::max<std::size_t>(
      16, static_cast<std::size_t>(std::ceil(static_cast<double>(kQuadraturePanels) * (b - a))));
  const double h = (b - a) / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t i = 0; i < panels; ++i) acc += g(a + (static_cast<double>(i) + 0.5) * h);
  return acc * h;
}

// frac(m * x) using an exact two-product to keep the phase accurate for large m.
double phase_fraction(std::int64_t m, double x) {
  const double md = static_cast<double>(m);
  const double hi = md * x;
  const double lo = std::fma(md, x, -hi);
  return frac(frac(hi) + lo);
}

std::complex<double> unit_phasor(std::int64_t m, double x) {
  const double angle = -2.0 * std::numbers::pi * phase_fraction(m, x);
  return {std::cos(angle), std::sin(angle)};
}

// integral_a^b p(x) e^{-2 pi i m x} dx = [-e^{-i w x} sum_r p^(r)(x) / (i w)^(r+1)]_a^b.
std::complex<double> piece_fourier(const Piece& piece, std::int64_t m) {
  if (m == 0) return definite_integral(piece.c, piece.a, piece.b);
  const std::complex<double> iw(0.0, 2.0 * std::numbers::pi * static_cast<double>(m));
  std::complex<double> at_b = 0.0;
  std::complex<double> at_a = 0.0;
  std::complex<double> denom = iw;
  for (Coefficients d = piece.c; !d.empty(); d = derivative(d)) {
    at_b += horner(d, piece.b) / denom;
    at_a += horner(d, piece.a) / denom;
    denom *= iw;
  }
  return -(unit_phasor(m, piece.b) * at_b - unit_phasor(m, piece.a) * at_a);
}

// Candidate extremum locations of a polynomial on [a, b].
std::vector<double> polynomial_extremum_candidates(const Coefficients& c, double a, double b) {
  std::vector<double> xs{a, b};
  const Coefficients d = derivative(c);
  if (d.empty()) return xs;
  constexpr int kSubdivisions = 64;
  const double h = (b - a) / kSubdivisions;
  for (int i = 0; i < kSubdivisions; ++i) {
    double lo = a + i * h;
    double hi = lo + h;
    double flo = horner(d, lo);
    const double fhi = horner(d, hi);
    if (flo == 0.0) xs.push_back(lo);
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = horner(d, mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    xs.push_back(0.5 * (lo + hi));
  }
  return xs;
}

void require_unit_interval(double a, double b) {
  if (!(0.0 <= a && a <= b && b <= 1.0)) {
    throw ArgumentError("integration bounds must satisfy 0 <= a <= b <= 1");
  }
}

}  // namespace

Observable Observable::identity() {
  return Observable(Polynomial{{0.0, 1.0}});
}

Observable Observable::constant(double value) {
  return polynomial({value});
}

Observable Observable::indicator(double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw ArgumentError("indicator needs 0 <= a < b <= 1");
  }
  return step({a, b}, {1.0});
}

Observable Observable::step(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.size() != values.size() + 1 || values.empty()) {
    throw ArgumentError("step observable needs len(breaks) == len(values) + 1 >= 2");
  }
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    if (!std::isfinite(breaks[i]) || breaks[i] < 0.0 || breaks[i] > 1.0) {
      throw ArgumentError("step breakpoints must lie in [0, 1]");
    }
    if (i > 0 && !(breaks[i - 1] < breaks[i])) {
      throw ArgumentError("step breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("step values must be finite and >= 0");
  }
  return Observable(Step{std::move(breaks), std::move(values)});
}

Observable Observable::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ArgumentError("polynomial coefficients must be finite");
  }
  Observable f(Polynomial{std::move(coefficients)});
  if (f.range_over(0.0, 1.0).first < -1e-12) {
    throw ArgumentError("polynomial observable is negative somewhere on [0, 1)");
  }
  return f;
}

Observable Observable::tabulated(std::vector<double> samples) {
  if (samples.size() < 2) throw ArgumentError("tabulated observable needs at least 2 samples");
  for (double v : samples) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ArgumentError("tabulated samples must be finite and >= 0");
    }
  }
  return Observable(Tabulated{std::move(samples)});
}

Observable Observable::with_declared_variation(double variation) const {
  if (!std::isfinite(variation) || variation < 0.0) {
    throw ArgumentError("declared variation must be finite and >= 0");
  }
  Observable copy = *this;
  copy.declared_variation_ = variation;
  return copy;
}

double Observable::operator()(double x) const {
  return std::visit(overloaded{
                        [x](const Step& s) {
                          if (x < s.breaks.front() || x >= s.breaks.back()) return 0.0;
                          const auto it = std::upper_bound(s.breaks.begin(), s.breaks.end(), x);
                          return s.values[static_cast<std::size_t>(it - s.breaks.begin()) - 1];
                        },
                        [x](const Polynomial& p) { return horner(p.coefficients, x); },
                        [x](const Tabulated& t) { return tabulated_value(t, x); },
                    },
                    variant_);
}

double Observable::integral_over(double a, double b) const {
  require_unit_interval(a, b);
  if (const auto* t = std::get_if<Tabulated>(&variant_)) {
    return midpoint([t](double x) { return tabulated_value(*t, x); }, a, b);
  }
  double acc = 0.0;
  for (const Piece& piece : pieces_of(variant_)) {
    acc += definite_integral(piece.c, std::max(a, piece.a), std::min(b, piece.b));
  }
  return acc;
}

double Observable::square_integral_over(double a, double b) const {
  require_unit_interval(a, b);
  if (const auto* t = std::get_if<Tabulated>(&variant_)) {
    return midpoint(
        [t](double x) {
          const double v = tabulated_value(*t, x);
          return v * v;
        },
        a, b);
  }
  double acc = 0.0;
  for (const Piece& piece : pieces_of(variant_)) {
    acc += definite_integral(multiply(piece.c, piece.c), std::max(a, piece.a),
                             std::min(b, piece.b));
  }
  return acc;
}

double Observable::centered_moment_over(double a, double b) const {
  require_unit_interval(a, b);
  const double mid = 0.5 * (a + b);
  if (const auto* t = std::get_if<Tabulated>(&variant_)) {
    return midpoint([t, mid](double x) { return (x - mid) * tabulated_value(*t, x); }, a, b);
  }
  double acc = 0.0;
  for (const Piece& piece : pieces_of(variant_)) {
    acc += definite_integral(multiply(piece.c, {-mid, 1.0}), std::max(a, piece.a),
                             std::min(b, piece.b));
  }
  return acc;
}

std::pair<double, double> Observable::range_over(double a, double b) const {
  require_unit_interval(a, b);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  std::visit(overloaded{
                 [&](const Step& s) {
                   if (a < s.breaks.front() || b > s.breaks.back() || a == b) take(0.0);
                   for (std::size_t i = 0; i < s.values.size(); ++i) {
                     const bool meets = s.breaks[i] < b && s.breaks[i + 1] > a;
                     if (meets || (a == b && s.breaks[i] <= a && a < s.breaks[i + 1])) {
                       take(s.values[i]);
                     }
                   }
                 },
                 [&](const Polynomial& p) {
                   for (double x : polynomial_extremum_candidates(p.coefficients, a, b)) {
                     take(horner(p.coefficients, x));
                   }
                 },
                 [&](const Tabulated& t) {
                   take(tabulated_value(t, a));
                   take(tabulated_value(t, b));
                   const auto n = t.samples.size();
                   for (std::size_t j = 0; j < n; ++j) {
                     const double node = static_cast<double>(j) / static_cast<double>(n - 1);
                     if (node > a && node < b) take(t.samples[j]);
                   }
                 },
             },
             variant_);
  return {lo, hi};
}

double Observable::sup_norm() const {
  return range_over(0.0, 1.0).second;
}

double integrate(const Observable& f, const MeasureSpec& measure) {
  return std::visit(overloaded{
                        [&](const Lebesgue&) { return f.integral_over(0.0, 1.0); },
                        [&](const AtomicOrbit&) {
                          const auto atoms = measure.atoms();
                          double acc = 0.0;
                          for (double x : atoms) acc += f(x);
                          return acc / static_cast<double>(atoms.size());
                        },
                        [&](const TransferStationary& s) {
                          const auto n = s.density.size();
                          const double width = 1.0 / static_cast<double>(n);
                          double acc = 0.0;
                          for (std::size_t i = 0; i < n; ++i) {
                            if (s.density[i] == 0.0) continue;
                            const double lo = static_cast<double>(i) * width;
                            const double hi = i + 1 == n ? 1.0 : lo + width;
                            acc += s.density[i] * f.integral_over(lo, hi);
                          }
                          return acc;
                        },
                    },
                    measure.variant());
}

double integrate_square(const Observable& f, const MeasureSpec& measure) {
  return std::visit(overloaded{
                        [&](const Lebesgue&) { return f.square_integral_over(0.0, 1.0); },
                        [&](const AtomicOrbit&) {
                          const auto atoms = measure.atoms();
                          double acc = 0.0;
                          for (double x : atoms) acc += f(x) * f(x);
                          return acc / static_cast<double>(atoms.size());
                        },
                        [&](const TransferStationary& s) {
                          const auto n = s.density.size();
                          const double width = 1.0 / static_cast<double>(n);
                          double acc = 0.0;
                          for (std::size_t i = 0; i < n; ++i) {
                            if (s.density[i] == 0.0) continue;
                            const double lo = static_cast<double>(i) * width;
                            const double hi = i + 1 == n ? 1.0 : lo + width;
                            acc += s.density[i] * f.square_integral_over(lo, hi);
                          }
                          return acc;
                        },
                    },
                    measure.variant());
}

double circle_autocorrelation(const Observable& f, double t) {
  t = frac(t);
  if (const auto* tab = std::get_if<Tabulated>(&f.variant())) {
    return midpoint(
        [&](double x) { return tabulated_value(*tab, frac(x - t)) * tabulated_value(*tab, x); },
        0.0, 1.0);
  }
  const std::vector<Piece> base = pieces_of(f.variant());
  // g(x) = f(frac(x - t)): every piece moves right by t and wraps past 1.
  std::vector<Piece> moved;
  moved.reserve(2 * base.size());
  for (const Piece& p : base) {
    const double a = p.a + t;
    const double b = p.b + t;
    if (b <= 1.0) {
      moved.push_back({a, b, shifted(p.c, t)});
    } else if (a >= 1.0) {
      moved.push_back({a - 1.0, b - 1.0, shifted(p.c, t - 1.0)});
    } else {
      moved.push_back({a, 1.0, shifted(p.c, t)});
      moved.push_back({0.0, b - 1.0, shifted(p.c, t - 1.0)});
    }
  }
  std::sort(moved.begin(), moved.end(), [](const Piece& l, const Piece& r) { return l.a < r.a; });

  double acc = 0.0;
  std::size_t j = 0;
  for (const Piece& p : base) {
    while (j < moved.size() && moved[j].b <= p.a) ++j;
    for (std::size_t k = j; k < moved.size() && moved[k].a < p.b; ++k) {
      const double lo = std::max(p.a, moved[k].a);
      const double hi = std::min(p.b, moved[k].b);
      acc += definite_integral(multiply(p.c, moved[k].c), lo, hi);
    }
  }
  return acc;
}

std::complex<double> fourier_coefficient(const Observable& f, std::int64_t m) {
  if (const auto* tab = std::get_if<Tabulated>(&f.variant())) {
    const double re = midpoint(
        [&](double x) { return tabulated_value(*tab, x) * unit_phasor(m, x).real(); }, 0.0, 1.0);
    const double im = midpoint(
        [&](double x) { return tabulated_value(*tab, x) * unit_phasor(m, x).imag(); }, 0.0, 1.0);
    return {re, im};
  }
  std::complex<double> acc = 0.0;
  for (const Piece& piece : pieces_of(f.variant())) acc += piece_fourier(piece, m);
  return acc;
}

std::vector<double> cyclic_samples(const Observable& f, std::int64_t p, std::int64_t q, double y) {
  if (q < 1) throw ArgumentError("cyclic samples need q >= 1");
  const std::int64_t step = ((p % q) + q) % q;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q));
  for (std::int64_t k = 0; k < q; ++k) {
    const auto r = static_cast<std::int64_t>((static_cast<detail::int128>(k) * step) % q);
    out.push_back(f(frac(y + static_cast<double>(r) / static_cast<double>(q))));
  }
  return out;
}

double sup_distance(const Observable& a, const Observable& b, std::size_t grid) {
  if (grid == 0) throw ArgumentError("sup_distance needs a non-empty grid");
  double worst = 0.0;
  const double h = 1.0 / static_cast<double>(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    for (double x : {static_cast<double>(i) * h, (static_cast<double>(i) + 0.5) * h}) {
      worst = std::max(worst, std::abs(a(x) - b(x)));
    }
  }
  return worst;
}

}  // namespace rtdiff
