#include "rtdiff/autocorrelation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "rtdiff/errors.hpp"
#include "rtdiff/transfer.hpp"

namespace rtdiff {

namespace {

constexpr std::array<std::pair<XiEngine, std::string_view>, 5> kEngineNames{{
    {XiEngine::empirical, "empirical"},
    {XiEngine::rational, "rational"},
    {XiEngine::irrational, "irrational"},
    {XiEngine::mixing, "mixing"},
    {XiEngine::analytic, "analytic"},
}};

XiSequence from_spectral(const SpectralData& data, std::size_t half_window, XiEngine engine) {
  const double mean_sq = data.mean_f * data.mean_f;
  CoefficientSeq values = CoefficientSeq::zeros(half_window);
  for (auto z = -static_cast<std::int64_t>(half_window);
       z <= static_cast<std::int64_t>(half_window); ++z) {
    values.set(z, 0.5 * (mean_sq + data.c(std::abs(z))));
  }
  return {std::move(values), engine};
}

}  // namespace

std::string_view to_string(XiEngine engine) noexcept {
  for (const auto& [e, name] : kEngineNames) {
    if (e == engine) return name;
  }
  return "unknown";
}

std::optional<XiEngine> parse_xi_engine(std::string_view name) noexcept {
  for (const auto& [e, n] : kEngineNames) {
    if (n == name) return e;
  }
  return std::nullopt;
}

XiSequence xi_empirical(const IntervalMap& map, const MeasureSpec& measure, const Observable& f,
                        double y, std::size_t half_window, std::int64_t horizon,
                        const OrbitOptions& options) {
  const auto window = static_cast<std::int64_t>(half_window);
  if (horizon < 1) throw ArgumentError("empirical horizon must be >= 1");
  if (window >= horizon) {
    throw WindowError("window Z = " + std::to_string(window) + " must be below the horizon N = " +
                      std::to_string(horizon));
  }
  if (horizon < kEmpiricalHorizonFactor * window) {
    throw WindowError("horizon N = " + std::to_string(horizon) + " must be at least " +
                      std::to_string(kEmpiricalHorizonFactor) + " * Z = " +
                      std::to_string(kEmpiricalHorizonFactor * window));
  }
  if (!measure.in_support(y)) {
    throw DomainError("reference point " + std::to_string(y) + " is outside the measure support");
  }

  CoefficientSeq values = CoefficientSeq::zeros(half_window);
  if (!map.invertible()) {
    const auto count = static_cast<std::size_t>(horizon + window);
    const std::vector<double> pts = orbit(map, y, 0, count, options);
    std::vector<double> w(count);
    std::transform(pts.begin(), pts.end(), w.begin(), [&f](double x) { return f(x); });
    const double norm = 1.0 / (2.0 * static_cast<double>(horizon));
    for (std::int64_t z = 0; z <= window; ++z) {
      double acc = 0.0;
      for (std::int64_t n = 0; n < horizon; ++n) {
        acc += w[static_cast<std::size_t>(n)] * w[static_cast<std::size_t>(n + z)];
      }
      values.set(z, acc * norm);
      values.set(-z, acc * norm);
    }
    return {std::move(values), XiEngine::empirical};
  }

  // Orbit indices -N-Z .. N+Z stored from offset 0.
  const std::int64_t first = -horizon - window;
  const auto count = static_cast<std::size_t>(2 * (horizon + window) + 1);
  const std::vector<double> pts = orbit(map, y, first, count, options);
  std::vector<double> w(count);
  std::transform(pts.begin(), pts.end(), w.begin(), [&f](double x) { return f(x); });
  auto at = [&](std::int64_t n) { return w[static_cast<std::size_t>(n - first)]; };
  const double norm = 1.0 / (2.0 * static_cast<double>(horizon) + 1.0);
  for (std::int64_t z = 0; z <= window; ++z) {
    double forward = 0.0;
    double backward = 0.0;
    for (std::int64_t n = -horizon; n <= horizon; ++n) {
      forward += at(n) * at(n - z);
      backward += at(n) * at(n + z);
    }
    const double value = 0.5 * (forward + backward) * norm;
    values.set(z, value);
    values.set(-z, value);
  }
  return {std::move(values), XiEngine::empirical};
}

XiSequence xi_rotation_rational(std::int64_t p, std::int64_t q, double w, const Observable& f,
                                std::size_t half_window) {
  const RotationNumber alpha = RotationNumber::rational(p, q);
  const std::vector<double> s = cyclic_samples(f, alpha.p(), alpha.q(), w);
  std::vector<double> cyclic(static_cast<std::size_t>(q), 0.0);
  for (std::int64_t z = 0; z < q; ++z) {
    double acc = 0.0;
    for (std::int64_t l = 0; l < q; ++l) {
      acc += s[static_cast<std::size_t>(((l - z) % q + q) % q)] * s[static_cast<std::size_t>(l)];
    }
    cyclic[static_cast<std::size_t>(z)] = acc / static_cast<double>(q);
  }
  // The cyclic autocorrelation is even on Z_q; reading both signs from the
  // smaller representative keeps the stored sequence exactly symmetric.
  CoefficientSeq values = CoefficientSeq::zeros(half_window);
  for (auto z = -static_cast<std::int64_t>(half_window);
       z <= static_cast<std::int64_t>(half_window); ++z) {
    const std::int64_t r = ((z % q) + q) % q;
    values.set(z, cyclic[static_cast<std::size_t>(std::min(r, q - r))]);
  }
  return {std::move(values), XiEngine::rational};
}

XiSequence xi_rotation_irrational(double alpha, const Observable& f, std::size_t half_window) {
  const RotationNumber rot = RotationNumber::irrational(alpha);
  CoefficientSeq values = CoefficientSeq::zeros(half_window);
  for (std::int64_t z = 0; z <= static_cast<std::int64_t>(half_window); ++z) {
    const double v = circle_autocorrelation(f, rot.multiple(z));
    values.set(z, v);
    values.set(-z, v);
  }
  return {std::move(values), XiEngine::irrational};
}

XiSequence xi_mixing(const IntervalMap& map, const Observable& f, std::size_t half_window,
                     std::size_t n_bins) {
  if (map.invertible()) throw ArgumentError("the mixing engine needs a non-invertible map");
  return from_spectral(ulam_spectral_data(map, f, n_bins, half_window), half_window,
                       XiEngine::mixing);
}

XiSequence xi_linear_mod_analytic(int k, const Observable& f, std::size_t half_window) {
  return from_spectral(linear_mod_exact_spectral_data(k, f, half_window), half_window,
                       XiEngine::analytic);
}

double xi_distance(const XiSequence& a, const XiSequence& b, std::size_t half_window) {
  if (!a.values.covers(half_window) || !b.values.covers(half_window)) {
    throw DimensionError("xi_distance window exceeds one of the sequences");
  }
  double worst = 0.0;
  for (auto z = -static_cast<std::int64_t>(half_window);
       z <= static_cast<std::int64_t>(half_window); ++z) {
    worst = std::max(worst, std::abs(a(z) - b(z)));
  }
  return worst;
}

}  // namespace rtdiff
