#include "rtdiff/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "rtdiff/combs.hpp"
#include "rtdiff/errors.hpp"
#include "wide_int.hpp"

namespace rtdiff {

namespace {

constexpr double kNegativeDensityTolerance = 1e-8;
constexpr double kRelativeMassFloor = 1e-24;

std::int64_t centered(std::int64_t j, std::int64_t q) {
  return 2 * j <= q ? j : j - q;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

// |sum_{n < count} s_n e^{-2 pi i j n / size}|^2 using a twiddle table of `size` entries.
double bin_power(std::span<const double> s, std::size_t count, std::size_t j,
                 std::span<const std::complex<double>> twiddle) {
  const std::size_t size = twiddle.size();
  std::complex<double> acc = 0.0;
  std::size_t phase = 0;
  for (std::size_t n = 0; n < count; ++n) {
    acc += s[n] * twiddle[phase];
    phase += j;
    if (phase >= size) phase -= size;
  }
  return std::norm(acc);
}

}  // namespace

std::string_view to_string(SpectrumKind kind) noexcept {
  switch (kind) {
    case SpectrumKind::pure_point:
      return "pure_point";
    case SpectrumKind::atom_plus_ac:
      return "atom_plus_ac";
    case SpectrumKind::estimated:
      return "estimated";
  }
  return "unknown";
}

double DiffractionSpectrum::atom_mass() const noexcept {
  double total = 0.0;
  for (const Atom& a : atoms) total += a.mass;
  return total;
}

void merge_atoms(std::vector<Atom>& atoms) {
  if (atoms.size() < 2) return;
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.position != b.position) return a.position < b.position;
    return std::abs(a.mode) < std::abs(b.mode);
  });
  auto absorb = [](Atom& into, const Atom& other) {
    into.mass += other.mass;
    into.uncertainty += other.uncertainty;
    if (std::abs(other.mode) < std::abs(into.mode) ||
        (std::abs(other.mode) == std::abs(into.mode) && other.mode > into.mode)) {
      into.mode = other.mode;
      into.position = other.position;
    }
  };
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!merged.empty() && a.position - merged.back().position <= kPositionResolution) {
      absorb(merged.back(), a);
    } else {
      merged.push_back(a);
    }
  }
  // Close the circle: the last atom may sit just below 1 next to one at 0.
  if (merged.size() > 1 &&
      merged.front().position + 1.0 - merged.back().position <= kPositionResolution) {
    absorb(merged.front(), merged.back());
    merged.pop_back();
  }
  atoms = std::move(merged);
}

DiffractionSpectrum rotation_diffraction_rational(std::int64_t p, std::int64_t q, double w,
                                                  const Observable& f) {
  const RotationNumber alpha = RotationNumber::rational(p, q);
  const std::vector<double> s = cyclic_samples(f, alpha.p(), alpha.q(), w);
  const std::vector<double> power = dft_power(s, static_cast<std::size_t>(q));
  const double q2 = static_cast<double>(q) * static_cast<double>(q);

  DiffractionSpectrum out;
  out.kind = SpectrumKind::pure_point;
  out.atoms.reserve(static_cast<std::size_t>(q));
  for (std::int64_t j = 0; j < q; ++j) {
    const auto residue = static_cast<std::int64_t>(
        (static_cast<detail::int128>(j) * alpha.p()) % static_cast<detail::int128>(q));
    out.atoms.push_back({static_cast<double>(residue) / static_cast<double>(q),
                         power[static_cast<std::size_t>(j)] / q2, centered(j, q), 0.0});
  }
  merge_atoms(out.atoms);
  double mean_square = 0.0;
  for (double v : s) mean_square += v * v;
  mean_square /= static_cast<double>(q);
  out.parseval_deficit = mean_square - out.atom_mass();
  return out;
}

DiffractionSpectrum rotation_diffraction_irrational(double alpha, const Observable& f,
                                                    std::int64_t max_mode) {
  if (max_mode < 0) throw ArgumentError("mode cutoff M must be >= 0");
  const RotationNumber rot = RotationNumber::irrational(alpha);
  const double xi0 = circle_autocorrelation(f, 0.0);
  const double floor = kRelativeMassFloor * std::max(xi0, 0.0);

  DiffractionSpectrum out;
  out.kind = SpectrumKind::pure_point;
  for (std::int64_t m = 0; m <= max_mode; ++m) {
    // Real f: |f^(-m)| = |f^(m)|, so one evaluation serves both modes.
    const double mass = std::norm(fourier_coefficient(f, m));
    if (mass <= floor) continue;
    out.atoms.push_back({rot.multiple(m), mass, m, 0.0});
    if (m != 0) out.atoms.push_back({rot.multiple(-m), mass, -m, 0.0});
  }
  merge_atoms(out.atoms);
  out.parseval_deficit = xi0 - out.atom_mass();
  return out;
}

double density_series(const CoefficientSeq& c, std::size_t half_window, double theta) {
  if (!c.covers(half_window)) throw DimensionError("density series cutoff exceeds coefficients");
  double g = 0.5 * c(0);
  for (std::size_t z = 1; z <= half_window; ++z) {
    const double phase = frac(theta * static_cast<double>(z));
    g += c(static_cast<std::int64_t>(z)) * std::cos(2.0 * std::numbers::pi * phase);
  }
  return g;
}

DiffractionSpectrum mixing_diffraction(const SpectralData& data, std::size_t half_window,
                                       std::size_t grid_size) {
  if (grid_size == 0) throw ArgumentError("density grid needs at least one point");
  DiffractionSpectrum out;
  out.kind = SpectrumKind::atom_plus_ac;
  out.atoms.push_back({0.0, 0.5 * data.mean_f * data.mean_f, 0, 0.0});

  DensityGrid grid;
  grid.theta = fourier_grid(grid_size);
  grid.g.reserve(grid_size);
  double integral = 0.0;
  for (double theta : grid.theta) {
    const double g = density_series(data.c, half_window, theta);
    if (g < -kNegativeDensityTolerance) {
      throw TruncationError("density " + std::to_string(g) + " at theta = " +
                            std::to_string(theta) + "; the coefficient cutoff Z = " +
                            std::to_string(half_window) + " is too small");
    }
    integral += g;
    grid.g.push_back(g);
  }
  integral /= static_cast<double>(grid_size);
  // Xi(0) = (mean^2 + c_0) / 2
  out.parseval_deficit = 0.5 * (data.mean_f * data.mean_f + data.c(0)) - out.atom_mass() - integral;
  out.density = std::move(grid);
  return out;
}

DiffractionSpectrum mixing_diffraction(const IntervalMap& map, const Observable& f,
                                       std::size_t n_bins, std::size_t half_window,
                                       std::size_t grid_size) {
  if (map.invertible()) throw ArgumentError("mixing diffraction needs a non-invertible map");
  return mixing_diffraction(ulam_spectral_data(map, f, n_bins, half_window), half_window,
                            grid_size);
}

double linear_mod_density(int k, double theta) {
  if (k < 2) throw ArgumentError("linear_mod needs k >= 2");
  const double kd = static_cast<double>(k);
  const double c = std::cos(2.0 * std::numbers::pi * frac(theta));
  return (kd - 1.0 / kd) / (24.0 * (kd + 1.0 / kd - 2.0 * c));
}

DiffractionSpectrum estimate_spectrum(const IntervalMap& map, const Observable& f, double y,
                                      std::int64_t horizon, const EstimateOptions& options) {
  constexpr std::int64_t kMinHorizon = 4096;
  if (horizon < kMinHorizon) {
    throw ArgumentError("estimate_spectrum needs N >= " + std::to_string(kMinHorizon));
  }
  const auto n = static_cast<std::size_t>(horizon);
  if (options.segments == 0 || n % options.segments != 0) {
    throw ArgumentError("segment count K = " + std::to_string(options.segments) +
                        " must divide N = " + std::to_string(n));
  }
  const std::vector<double> pts = orbit(map, y, 0, n, options.orbit);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = f(pts[i]);
    if (!std::isfinite(s[i])) throw EvaluationError("observable is not finite along the orbit");
  }
  const double convention = map.invertible() ? 1.0 : 0.5;
  auto mass_scale = [convention](std::size_t len) {
    return convention / (static_cast<double>(len) * static_cast<double>(len));
  };

  std::vector<double> mass = dft_power(s, n);
  for (double& v : mass) v *= mass_scale(n);
  const double threshold = options.threshold_factor * median_of(mass);

  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    twiddle[r] = {std::cos(angle), std::sin(angle)};
  }
  const std::size_t half = n / 2;
  const std::size_t quarter = n / 4;
  auto prefix_threshold = [&](std::size_t len) {
    std::vector<double> p = dft_power(std::span<const double>(s).first(len), len);
    for (double& v : p) v *= mass_scale(len);
    return options.threshold_factor * median_of(std::move(p));
  };
  const double threshold_half = prefix_threshold(half);
  const double threshold_quarter = prefix_threshold(quarter);

  DiffractionSpectrum out;
  out.kind = SpectrumKind::estimated;
  for (std::size_t j = 0; j < n; ++j) {
    const double m_full = mass[j];
    if (!(m_full > threshold) || m_full < options.min_mass) continue;
    if (m_full < mass[(j + n - 1) % n] || m_full < mass[(j + 1) % n]) continue;
    const double m_half = bin_power(s, half, j, twiddle) * mass_scale(half);
    const double m_quarter = bin_power(s, quarter, j, twiddle) * mass_scale(quarter);
    if (!(m_half > threshold_half) || !(m_quarter > threshold_quarter)) continue;
    if (std::abs(m_full - m_half) > options.stability_tolerance * m_full) continue;
    if (std::abs(m_half - m_quarter) > options.stability_tolerance * m_half) continue;
    out.atoms.push_back({static_cast<double>(j) / static_cast<double>(n), m_full,
                         centered(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n)),
                         std::abs(m_full - m_half)});
  }

  const std::size_t len = n / options.segments;
  std::vector<double> average(len, 0.0);
  for (std::size_t k = 0; k < options.segments; ++k) {
    const std::vector<double> p = dft_power(std::span<const double>(s).subspan(k * len, len), len);
    for (std::size_t j = 0; j < len; ++j) average[j] += p[j];
  }
  std::vector<bool> masked(len, false);
  for (const Atom& a : out.atoms) {
    const double pos = a.position * static_cast<double>(len);
    masked[static_cast<std::size_t>(std::floor(pos)) % len] = true;
    masked[static_cast<std::size_t>(std::ceil(pos)) % len] = true;
  }
  DensityGrid grid;
  double integral = 0.0;
  const double density_scale = convention / (static_cast<double>(options.segments) *
                                             static_cast<double>(len));
  for (std::size_t j = 0; j < len; ++j) {
    if (masked[j]) continue;
    grid.theta.push_back(static_cast<double>(j) / static_cast<double>(len));
    grid.g.push_back(average[j] * density_scale);
    integral += grid.g.back() / static_cast<double>(len);
  }
  double mean_square = 0.0;
  for (double v : s) mean_square += v * v;
  mean_square *= convention / static_cast<double>(n);
  out.parseval_deficit = mean_square - out.atom_mass() - integral;
  out.density = std::move(grid);
  return out;
}

TopAtoms top_atoms(const DiffractionSpectrum& spectrum, std::size_t count) {
  if (spectrum.atoms.empty()) throw ArgumentError("top_atoms needs a spectrum with atoms");
  TopAtoms out;
  out.atoms = spectrum.atoms;
  std::sort(out.atoms.begin(), out.atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    if (std::abs(a.mode) != std::abs(b.mode)) return std::abs(a.mode) < std::abs(b.mode);
    return a.mode > b.mode;
  });
  if (count > out.atoms.size()) {
    out.truncated = true;
  } else {
    out.atoms.resize(count);
  }
  return out;
}

}  // namespace rtdiff
