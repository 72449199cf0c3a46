#include "rtdiff/combs.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>

#include "rtdiff/errors.hpp"

namespace rtdiff {

namespace {

struct FftwDeleter {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

struct PlanDeleter {
  void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};

using PlanHandle = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

// Restricts the comb to B_n = [-n, n] and returns (first index, weights).
std::pair<std::int64_t, std::span<const double>> restrict_to_window(const WeightedComb& comb,
                                                                    std::int64_t n) {
  const std::int64_t lo_required = comb.invertible_mode ? -n : 0;
  if (n < 1) throw ArgumentError("window half-width must be >= 1");
  if (comb.first() > lo_required || comb.last() < n) {
    throw DimensionError("comb support [" + std::to_string(comb.first()) + ", " +
                         std::to_string(comb.last()) + "] does not cover the window [" +
                         std::to_string(lo_required) + ", " + std::to_string(n) + "]");
  }
  const std::int64_t lo = std::max(comb.first(), -n);
  const std::int64_t hi = std::min(comb.last(), n);
  const auto offset = static_cast<std::size_t>(lo - comb.first());
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  return {lo, std::span<const double>(comb.weights).subspan(offset, len)};
}

double phase_fraction(double theta, std::int64_t m) {
  const double md = static_cast<double>(m);
  const double hi = theta * md;
  const double lo = std::fma(theta, md, -hi);
  return frac(frac(hi) + lo);
}

}  // namespace

double WeightedComb::weight_at(std::int64_t z) const noexcept {
  if (z < first() || z > last()) return 0.0;
  return weights[static_cast<std::size_t>(z - origin_index)];
}

void WeightedComb::validate() const {
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("comb weights must be finite and >= 0");
  }
  if (!invertible_mode && origin_index < 0) {
    throw ArgumentError("non-invertible comb cannot have support below 0");
  }
}

CoefficientSeq::CoefficientSeq(std::size_t half_window, std::vector<double> values)
    : half_window_(half_window), values_(std::move(values)) {
  if (values_.size() != 2 * half_window_ + 1) {
    throw DimensionError("coefficient sequence needs 2Z+1 values");
  }
}

CoefficientSeq CoefficientSeq::zeros(std::size_t half_window) {
  return CoefficientSeq(half_window, std::vector<double>(2 * half_window + 1, 0.0));
}

std::size_t CoefficientSeq::slot(std::int64_t z) const {
  const auto bound = static_cast<std::int64_t>(half_window_);
  if (z < -bound || z > bound) {
    throw DimensionError("lag " + std::to_string(z) + " outside window [-" +
                         std::to_string(bound) + ", " + std::to_string(bound) + "]");
  }
  return static_cast<std::size_t>(z + bound);
}

double CoefficientSeq::operator()(std::int64_t z) const {
  return values_[slot(z)];
}

void CoefficientSeq::set(std::int64_t z, double value) {
  values_[slot(z)] = value;
}

CoefficientSeq CoefficientSeq::truncated(std::size_t half_window) const {
  if (half_window > half_window_) throw DimensionError("cannot widen a coefficient sequence");
  const std::size_t start = half_window_ - half_window;
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(start);
  return CoefficientSeq(half_window,
                        std::vector<double>(first, first + static_cast<std::ptrdiff_t>(
                                                               2 * half_window + 1)));
}

WeightedComb build_comb(const IntervalMap& map, const Observable& f, double y,
                        std::int64_t horizon, const OrbitOptions& options) {
  if (horizon < 1) throw ArgumentError("comb horizon must be >= 1");
  WeightedComb comb;
  comb.invertible_mode = map.invertible();
  comb.origin_index = comb.invertible_mode ? -horizon : 0;
  const auto count = static_cast<std::size_t>(comb.invertible_mode ? 2 * horizon + 1 : horizon + 1);
  const std::vector<double> points = orbit(map, y, comb.origin_index, count, options);
  comb.weights.reserve(count);
  for (double x : points) {
    const double w = f(x);
    if (!std::isfinite(w)) {
      throw EvaluationError("observable is not finite at x = " + std::to_string(x));
    }
    if (w < 0.0) throw EvaluationError("observable is negative at x = " + std::to_string(x));
    comb.weights.push_back(w);
  }
  return comb;
}

CoefficientSeq finite_autocorrelation(const WeightedComb& comb, std::int64_t n) {
  const auto [lo, w] = restrict_to_window(comb, n);
  (void)lo;
  const auto half = static_cast<std::size_t>(2 * n);
  CoefficientSeq out = CoefficientSeq::zeros(half);
  const double norm = 1.0 / static_cast<double>(2 * n + 1);
  const auto len = static_cast<std::int64_t>(w.size());
  for (std::int64_t z = 0; z <= std::min<std::int64_t>(2 * n, len - 1); ++z) {
    double acc = 0.0;
    for (std::int64_t m = 0; m + z < len; ++m) {
      acc += w[static_cast<std::size_t>(m)] * w[static_cast<std::size_t>(m + z)];
    }
    out.set(z, acc * norm);
    out.set(-z, acc * norm);
  }
  return out;
}

std::vector<double> fourier_grid(std::size_t size) {
  std::vector<double> grid(size);
  for (std::size_t j = 0; j < size; ++j) {
    grid[j] = static_cast<double>(j) / static_cast<double>(size);
  }
  return grid;
}

std::vector<double> periodogram(const WeightedComb& comb, std::int64_t n,
                                std::span<const double> grid) {
  const auto [lo, w] = restrict_to_window(comb, n);
  const double norm = 1.0 / static_cast<double>(2 * n + 1);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double theta : grid) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      const double angle =
          -2.0 * std::numbers::pi * phase_fraction(theta, lo + static_cast<std::int64_t>(i));
      acc += w[i] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out.push_back(std::norm(acc) * norm);
  }
  return out;
}

std::vector<double> dft_power(std::span<const double> samples, std::size_t grid_size) {
  if (grid_size == 0) throw ArgumentError("grid size must be >= 1");
  std::unique_ptr<double, FftwDeleter> in(
      static_cast<double*>(fftw_malloc(sizeof(double) * grid_size)));
  const std::size_t bins = grid_size / 2 + 1;
  std::unique_ptr<fftw_complex, FftwDeleter> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  PlanHandle plan(fftw_plan_dft_r2c_1d(static_cast<int>(grid_size), in.get(), out.get(),
                                       FFTW_ESTIMATE));
  std::fill_n(in.get(), grid_size, 0.0);
  for (std::size_t k = 0; k < samples.size(); ++k) in.get()[k % grid_size] += samples[k];
  fftw_execute(plan.get());

  std::vector<double> power(grid_size);
  for (std::size_t j = 0; j < bins; ++j) {
    const double re = out.get()[j][0];
    const double im = out.get()[j][1];
    power[j] = re * re + im * im;
  }
  for (std::size_t j = bins; j < grid_size; ++j) power[j] = power[grid_size - j];
  return power;
}

std::vector<double> periodogram_fourier(const WeightedComb& comb, std::int64_t n,
                                        std::size_t grid_size) {
  const auto [lo, w] = restrict_to_window(comb, n);
  // Rotate so that sample i sits at the residue of its absolute index.
  const auto size = static_cast<std::int64_t>(grid_size);
  std::vector<double> folded(grid_size, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::int64_t m = lo + static_cast<std::int64_t>(i);
    folded[static_cast<std::size_t>(((m % size) + size) % size)] += w[i];
  }
  std::vector<double> power = dft_power(folded, grid_size);
  const double norm = 1.0 / static_cast<double>(2 * n + 1);
  for (double& p : power) p *= norm;
  return power;
}

}  // namespace rtdiff
