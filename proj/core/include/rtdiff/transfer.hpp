#pragma once

#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <vector>

#include "rtdiff/combs.hpp"
#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff {

// Ulam discretization of the Perron-Frobenius operator on the uniform
// partition I_i = [i/n, (i+1)/n):
//   matrix(i, j) = Lambda(I_i ∩ T^{-1} I_j) / Lambda(I_i).
// Rows are stochastic; densities (cell values) are pushed forward as row
// vectors, h -> h * matrix.
//
// `linear` is the same construction on cellwise linear functions: a function
// a_i + b_i * (2(x - x_i)/w - 1) on each cell (x_i its left end, w = 1/n) is
// stored as the row vector (a_0, b_0, a_1, b_1, ...). Its (a, a) block is
// `matrix` before row normalization. Correlations use it: with cell averages
// alone, c_z on ×k carries a relative error of order k^(2z)/n^2.
struct UlamOperator {
  std::size_t bins = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::SparseMatrix<double, Eigen::RowMajor> linear;

  [[nodiscard]] std::vector<double> push_forward(std::span<const double> density) const;
  // max_i |sum_j matrix(i, j) - 1|
  [[nodiscard]] double row_sum_defect() const;
};

// Exact interval intersections for affine branches (LinearMod included);
// bisection on the branch inverse otherwise.
[[nodiscard]] UlamOperator build_ulam(const IntervalMap& map, std::size_t n_bins);

struct PowerIterationOptions {
  double tolerance = 1e-12;
  std::size_t max_iterations = 100000;
};

// Invariant density on the Ulam cells, normalized to mean one.
[[nodiscard]] std::vector<double> stationary_density(const UlamOperator& op,
                                                     const PowerIterationOptions& options = {});

struct SpectralData {
  std::vector<double> h;  // stationary density per cell; constant 1 for the exact ×k engine
  double mean_f = 0.0;    // integral f h dLambda
  CoefficientSeq c;       // c_z for |z| <= Z
};

// c_0 = int f^2 h - mean^2; c_z = int P^|z|(f h) f dLambda - mean^2 with the
// cellwise linear projection of f h pushed through `linear`.
[[nodiscard]] CoefficientSeq correlation_coefficients(const UlamOperator& op,
                                                      std::span<const double> h,
                                                      const Observable& f,
                                                      std::size_t half_window);

[[nodiscard]] SpectralData ulam_spectral_data(const IntervalMap& map, const Observable& f,
                                              std::size_t n_bins, std::size_t half_window);

// For x -> kx mod 1 the transfer operator maps polynomials of degree d to
// polynomials of degree d, so c_z has an exact finite-dimensional form.
// Requires a Polynomial observable.
[[nodiscard]] SpectralData linear_mod_exact_spectral_data(int k, const Observable& f,
                                                          std::size_t half_window);

}  // namespace rtdiff
