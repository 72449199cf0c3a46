#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff {

// Finitely windowed weighted Dirac comb on Z: weight at z is
// weights[z - origin_index], zero outside the stored range.
struct WeightedComb {
  std::int64_t origin_index = 0;
  std::vector<double> weights;
  bool invertible_mode = false;

  [[nodiscard]] std::int64_t first() const noexcept { return origin_index; }
  [[nodiscard]] std::int64_t last() const noexcept {
    return origin_index + static_cast<std::int64_t>(weights.size()) - 1;
  }
  [[nodiscard]] double weight_at(std::int64_t z) const noexcept;

  // Throws ArgumentError when weights are negative or non-finite, or when a
  // non-invertible comb has support below zero.
  void validate() const;
};

// Real sequence indexed by z in [-Z, Z].
class CoefficientSeq {
 public:
  CoefficientSeq() = default;
  CoefficientSeq(std::size_t half_window, std::vector<double> values);
  static CoefficientSeq zeros(std::size_t half_window);

  [[nodiscard]] std::size_t half_window() const noexcept { return half_window_; }
  [[nodiscard]] bool covers(std::size_t half_window) const noexcept {
    return half_window <= half_window_;
  }
  // Throws DimensionError outside [-Z, Z].
  [[nodiscard]] double operator()(std::int64_t z) const;
  void set(std::int64_t z, double value);
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  // Restriction to [-Z', Z'] for Z' <= Z.
  [[nodiscard]] CoefficientSeq truncated(std::size_t half_window) const;

 private:
  [[nodiscard]] std::size_t slot(std::int64_t z) const;

  std::size_t half_window_ = 0;
  std::vector<double> values_{0.0};
};

// f-weighted return time comb of y. Non-invertible maps give weights
// f(T^n y) for 0 <= n <= N; rotations give f(T^z y) for -N <= z <= N.
[[nodiscard]] WeightedComb build_comb(const IntervalMap& map, const Observable& f, double y,
                                      std::int64_t horizon, const OrbitOptions& options = {});

// (mu|_n * mu|_n~)(z) / (2n+1) for z in [-2n, 2n].
[[nodiscard]] CoefficientSeq finite_autocorrelation(const WeightedComb& comb, std::int64_t n);

// Fourier frequencies j / size, j = 0..size-1.
[[nodiscard]] std::vector<double> fourier_grid(std::size_t size);

// |sum_{m in B_n} w(m) e^{-2 pi i theta m}|^2 / (2n+1), evaluated directly.
[[nodiscard]] std::vector<double> periodogram(const WeightedComb& comb, std::int64_t n,
                                              std::span<const double> grid);

// Same quantity on the Fourier grid j / grid_size via an FFT of the folded comb.
[[nodiscard]] std::vector<double> periodogram_fourier(const WeightedComb& comb, std::int64_t n,
                                                      std::size_t grid_size);

// |sum_k samples[k] e^{-2 pi i j k / grid_size}|^2 for j = 0..grid_size-1.
// Samples beyond grid_size are folded modulo grid_size.
[[nodiscard]] std::vector<double> dft_power(std::span<const double> samples,
                                            std::size_t grid_size);

}  // namespace rtdiff
