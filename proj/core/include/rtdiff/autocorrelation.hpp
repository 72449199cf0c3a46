#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rtdiff/combs.hpp"
#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff {

enum class XiEngine { empirical, rational, irrational, mixing, analytic };

[[nodiscard]] std::string_view to_string(XiEngine engine) noexcept;
[[nodiscard]] std::optional<XiEngine> parse_xi_engine(std::string_view name) noexcept;

// Autocorrelation coefficients Xi(T, eta)(z) on [-Z, Z].
//
// Convention: for non-invertible maps Xi(z) = 1/2 int f∘T^|z| · f d eta,
// for invertible maps Xi(z) = int f∘T^{-z} · f d eta (no factor 1/2).
// The stored values already include the factor; downstream code consumes
// them as they are.
struct XiSequence {
  CoefficientSeq values;
  XiEngine engine = XiEngine::empirical;

  [[nodiscard]] double operator()(std::int64_t z) const { return values(z); }
  [[nodiscard]] std::size_t half_window() const noexcept { return values.half_window(); }
};

// Minimum horizon-to-window ratio accepted by xi_empirical.
inline constexpr std::int64_t kEmpiricalHorizonFactor = 100;

// Finite Birkhoff averages along the orbit of y:
//   non-invertible: (1/(2N)) sum_{0<=n<N} f(T^n y) f(T^{n+|z|} y)
//   invertible:     (1/(2N+1)) sum_{|n|<=N} f(T^n y) f(T^{n-z} y), symmetrized.
// Requires N >= 100 Z (WindowError) and y in the support of the measure.
[[nodiscard]] XiSequence xi_empirical(const IntervalMap& map, const MeasureSpec& measure,
                                      const Observable& f, double y, std::size_t half_window,
                                      std::int64_t horizon, const OrbitOptions& options = {});

// Xi(T_{p/q}, eta_{q,w})(z) = q^{-1} sum_l s(l - z) s(l), s = cyclic_samples(f, p, q, w).
[[nodiscard]] XiSequence xi_rotation_rational(std::int64_t p, std::int64_t q, double w,
                                              const Observable& f, std::size_t half_window);

// Xi(T_alpha, Lambda)(z) = circle_autocorrelation(f, frac(z alpha)). The
// caller declares alpha irrational.
[[nodiscard]] XiSequence xi_rotation_irrational(double alpha, const Observable& f,
                                                std::size_t half_window);

// Xi(z) = ((int f d eta)^2 + c_z) / 2 with c_z from the Ulam operator.
[[nodiscard]] XiSequence xi_mixing(const IntervalMap& map, const Observable& f,
                                   std::size_t half_window, std::size_t n_bins);

// Exact Xi for x -> kx mod 1 with Lebesgue measure and a polynomial observable.
// For f(x) = x this is (1/8)(1 + k^{-|z|}/3).
[[nodiscard]] XiSequence xi_linear_mod_analytic(int k, const Observable& f,
                                                std::size_t half_window);

// max_{|z|<=Z} |a(z) - b(z)|; DimensionError if either misses the window.
[[nodiscard]] double xi_distance(const XiSequence& a, const XiSequence& b,
                                 std::size_t half_window);

}  // namespace rtdiff
