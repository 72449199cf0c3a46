#include "rtdiff/transfer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "rtdiff/errors.hpp"

namespace rtdiff {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<Branch> branches_for(const IntervalMap& map) {
  if (const auto* lm = map.as_linear_mod()) {
    std::vector<Branch> out;
    const double k = lm->k;
    for (int m = 0; m < lm->k; ++m) {
      out.push_back(Branch::affine(m / k, (m + 1) / k, k, -static_cast<double>(m)));
    }
    out.back().upper = 1.0;
    return out;
  }
  if (const auto* pm = map.as_piecewise()) return pm->branches;
  throw ArgumentError("Ulam discretization needs a piecewise monotone or linear_mod map, got " +
                      map.describe());
}

void check_nonsingular(const Branch& b) {
  if (b.is_affine()) {
    if (*b.slope == 0.0 || !std::isfinite(*b.slope)) {
      throw SingularityError("affine branch has zero slope");
    }
    return;
  }
  constexpr int kProbes = 33;
  for (int i = 1; i < kProbes; ++i) {
    const double x = b.lower + (b.upper - b.lower) * i / kProbes;
    const double d = b.derivative(x);
    if (!std::isfinite(d) || std::abs(d) < 1e-12) {
      throw SingularityError("branch derivative vanishes near x = " + std::to_string(x));
    }
  }
}

// Point of [a, b] where the monotone branch reaches `level` (clamped to the ends).
double invert_monotone(const Branch& br, double a, double b, double level) {
  const double fa = br.map(a);
  const double fb = br.map(b);
  const bool increasing = fb >= fa;
  if (increasing ? level <= fa : level >= fa) return a;
  if (increasing ? level >= fb : level <= fb) return b;
  double lo = a;
  double hi = b;
  for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = increasing ? br.map(mid) < level : br.map(mid) > level;
    (below ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Three-point Gauss-Legendre on [x0, x1]; exact for the quadratic integrands
// of affine branches.
template <class F>
double gauss3(F&& g, double x0, double x1) {
  const double mid = 0.5 * (x0 + x1);
  const double half = 0.5 * (x1 - x0);
  const double off = half * std::sqrt(0.6);
  return half * (5.0 * g(mid - off) + 8.0 * g(mid) + 5.0 * g(mid + off)) / 9.0;
}

struct RowEntries {
  std::vector<Triplet>& cells;
  std::vector<Triplet>& linear;
};

void append_row_entries(const Branch& br, std::size_t row, double a, double b, std::size_t bins,
                        RowEntries out) {
  const double n = static_cast<double>(bins);
  const double width = 1.0 / n;
  const double ya = br.map(a);
  const double yb = br.map(b);
  const double u = std::clamp(std::min(ya, yb), 0.0, 1.0);
  const double v = std::clamp(std::max(ya, yb), 0.0, 1.0);
  if (!(v > u)) return;
  const double x_row = static_cast<double>(row) / n;
  const auto j_lo = std::min(bins - 1, static_cast<std::size_t>(std::floor(u * n)));
  const auto j_hi = std::min(bins - 1, static_cast<std::size_t>(std::ceil(v * n)) - 1);
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    const double c0 = static_cast<double>(j) / n;
    const double c1 = static_cast<double>(j + 1) / n;
    double x0 = 0.0;
    double x1 = 0.0;
    double preimage_length = 0.0;
    if (br.is_affine()) {
      const double y0 = std::max(u, c0);
      const double y1 = std::min(v, c1);
      if (y1 <= y0) continue;
      preimage_length = (y1 - y0) / std::abs(*br.slope);
      x0 = (y0 - *br.intercept) / *br.slope;
      x1 = (y1 - *br.intercept) / *br.slope;
    } else {
      x0 = invert_monotone(br, a, b, c0);
      x1 = invert_monotone(br, a, b, c1);
      preimage_length = std::abs(x1 - x0);
    }
    if (!(preimage_length > 0.0)) continue;
    if (x1 < x0) std::swap(x0, x1);
    out.cells.emplace_back(row, j, preimage_length * n);

    auto src = [&](double x) { return 2.0 * (x - x_row) * n - 1.0; };
    auto dst = [&](double x) { return 2.0 * (br.map(x) - c0) * n - 1.0; };
    const double e01 = gauss3(dst, x0, x1);
    const double e10 = gauss3(src, x0, x1);
    const double e11 = gauss3([&](double x) { return src(x) * dst(x); }, x0, x1);
    // Dividing by the squared basis norms (w and w/3) gives target coefficients.
    out.linear.emplace_back(2 * row, 2 * j, preimage_length * n);
    out.linear.emplace_back(2 * row, 2 * j + 1, 3.0 * e01 / width);
    out.linear.emplace_back(2 * row + 1, 2 * j, e10 / width);
    out.linear.emplace_back(2 * row + 1, 2 * j + 1, 3.0 * e11 / width);
  }
}

}  // namespace

std::vector<double> UlamOperator::push_forward(std::span<const double> density) const {
  if (density.size() != bins) throw DimensionError("density length does not match Ulam bins");
  const Eigen::Map<const Eigen::VectorXd> in(density.data(), static_cast<Eigen::Index>(bins));
  const Eigen::VectorXd out = matrix.transpose() * in;
  return {out.data(), out.data() + out.size()};
}

double UlamOperator::row_sum_defect() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < matrix.outerSize(); ++r) {
    double sum = 0.0;
    for (decltype(matrix)::InnerIterator it(matrix, r); it; ++it) sum += it.value();
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

UlamOperator build_ulam(const IntervalMap& map, std::size_t n_bins) {
  if (n_bins < 2) throw ArgumentError("Ulam discretization needs at least 2 bins");
  const std::vector<Branch> branches = branches_for(map);
  for (const Branch& b : branches) check_nonsingular(b);

  const double n = static_cast<double>(n_bins);
  std::vector<Triplet> triplets;
  std::vector<Triplet> linear;
  triplets.reserve(n_bins * 4);
  linear.reserve(n_bins * 16);
  std::size_t first_branch = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    while (first_branch + 1 < branches.size() && branches[first_branch].upper <= lo) ++first_branch;
    for (std::size_t b = first_branch; b < branches.size() && branches[b].lower < hi; ++b) {
      const double a = std::max(lo, branches[b].lower);
      const double e = std::min(hi, branches[b].upper);
      if (e > a) append_row_entries(branches[b], i, a, e, n_bins, {triplets, linear});
    }
  }

  UlamOperator op;
  op.bins = n_bins;
  op.matrix.resize(static_cast<Eigen::Index>(n_bins), static_cast<Eigen::Index>(n_bins));
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  op.matrix.makeCompressed();
  op.linear.resize(static_cast<Eigen::Index>(2 * n_bins), static_cast<Eigen::Index>(2 * n_bins));
  op.linear.setFromTriplets(linear.begin(), linear.end());
  op.linear.makeCompressed();
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r) {
    double sum = 0.0;
    for (decltype(op.matrix)::InnerIterator it(op.matrix, r); it; ++it) sum += it.value();
    if (sum <= 0.0) throw SingularityError("Ulam row " + std::to_string(r) + " has no mass");
    for (decltype(op.matrix)::InnerIterator it(op.matrix, r); it; ++it) it.valueRef() /= sum;
  }
  return op;
}

std::vector<double> stationary_density(const UlamOperator& op,
                                       const PowerIterationOptions& options) {
  const auto n = static_cast<Eigen::Index>(op.bins);
  Eigen::VectorXd h = Eigen::VectorXd::Ones(n);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd next = op.matrix.transpose() * h;
    next = next.cwiseMax(0.0);
    next *= static_cast<double>(n) / next.sum();
    const double change = (next - h).lpNorm<1>() / static_cast<double>(n);
    h = std::move(next);
    if (change < options.tolerance) return {h.data(), h.data() + h.size()};
  }
  throw SpectralError("power iteration did not converge after " +
                      std::to_string(options.max_iterations) + " steps");
}

CoefficientSeq correlation_coefficients(const UlamOperator& op, std::span<const double> h,
                                        const Observable& f, std::size_t half_window) {
  if (h.size() != op.bins) throw DimensionError("density length does not match Ulam bins");
  const std::size_t n = op.bins;
  const double width = 1.0 / static_cast<double>(n);
  // weights pairs a coefficient vector with f: int f * (a + b * phi) over each cell.
  Eigen::VectorXd weights(static_cast<Eigen::Index>(2 * n));
  double mean = 0.0;
  double second = 0.0;
  Eigen::VectorXd g(static_cast<Eigen::Index>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) * width;
    const double hi = i + 1 == n ? 1.0 : static_cast<double>(i + 1) * width;
    const double integral = f.integral_over(lo, hi);
    const double slope_moment = 2.0 * f.centered_moment_over(lo, hi) / (hi - lo);
    const auto r = static_cast<Eigen::Index>(2 * i);
    weights[r] = integral;
    weights[r + 1] = slope_moment;
    mean += h[i] * integral;
    second += h[i] * f.square_integral_over(lo, hi);
    // L2 projection of f h onto {1, phi}: norms w and w/3.
    g[r] = h[i] * integral / (hi - lo);
    g[r + 1] = 3.0 * h[i] * slope_moment / (hi - lo);
  }

  CoefficientSeq c = CoefficientSeq::zeros(half_window);
  c.set(0, second - mean * mean);
  for (std::size_t z = 1; z <= half_window; ++z) {
    g = op.linear.transpose() * g;
    const double value = g.dot(weights) - mean * mean;
    c.set(static_cast<std::int64_t>(z), value);
    c.set(-static_cast<std::int64_t>(z), value);
  }
  return c;
}

SpectralData ulam_spectral_data(const IntervalMap& map, const Observable& f, std::size_t n_bins,
                                std::size_t half_window) {
  const UlamOperator op = build_ulam(map, n_bins);
  SpectralData out;
  out.h = stationary_density(op);
  out.mean_f = integrate(f, MeasureSpec::stationary(out.h));
  out.c = correlation_coefficients(op, out.h, f, half_window);
  return out;
}

SpectralData linear_mod_exact_spectral_data(int k, const Observable& f, std::size_t half_window) {
  if (k < 2) throw ArgumentError("linear_mod needs k >= 2");
  const auto* poly = std::get_if<Polynomial>(&f.variant());
  if (poly == nullptr) {
    throw ArgumentError("the exact linear_mod engine needs a polynomial observable");
  }
  const auto d = static_cast<Eigen::Index>(poly->coefficients.size());

  // power_sums[r] = sum_{m<k} m^r
  std::vector<double> power_sums(static_cast<std::size_t>(d), 0.0);
  for (int m = 0; m < k; ++m) {
    double p = 1.0;
    for (Eigen::Index r = 0; r < d; ++r) {
      power_sums[static_cast<std::size_t>(r)] += p;
      p *= m;
    }
  }
  // P x^j = k^{-j-1} sum_i C(j,i) x^i sum_m m^{j-i}
  Eigen::MatrixXd transfer = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double binom = 1.0;
    const double scale = std::pow(static_cast<double>(k), -static_cast<double>(j + 1));
    for (Eigen::Index i = 0; i <= j; ++i) {
      transfer(i, j) = scale * binom * power_sums[static_cast<std::size_t>(j - i)];
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
  }
  // gram(a, b) = int_0^1 x^{a+b} dx
  Eigen::MatrixXd gram(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) gram(a, b) = 1.0 / static_cast<double>(a + b + 1);
  }

  const Eigen::Map<const Eigen::VectorXd> coeffs(poly->coefficients.data(), d);
  const Eigen::VectorXd weights = gram * coeffs;
  SpectralData out;
  out.h.assign(1, 1.0);
  out.mean_f = f.integral_over(0.0, 1.0);
  const double mean_sq = out.mean_f * out.mean_f;
  out.c = CoefficientSeq::zeros(half_window);
  Eigen::VectorXd g = coeffs;
  out.c.set(0, weights.dot(g) - mean_sq);
  for (std::size_t z = 1; z <= half_window; ++z) {
    g = transfer * g;
    const double value = weights.dot(g) - mean_sq;
    out.c.set(static_cast<std::int64_t>(z), value);
    out.c.set(-static_cast<std::int64_t>(z), value);
  }
  return out;
}

}  // namespace rtdiff
