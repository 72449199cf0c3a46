#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"
#include "rtdiff/transfer.hpp"

namespace rtdiff {

// Atoms and densities live on the additive circle [0, 1). The character
// x -> e^{2 pi i x z} with x = 0 is the trivial character, so the atom that
// multiplicative notation writes at 1 sits at position 0 here.
inline constexpr double kPositionResolution = 1e-9;

struct Atom {
  double position = 0.0;
  double mass = 0.0;
  std::int64_t mode = 0;
  double uncertainty = 0.0;
};

struct DensityGrid {
  std::vector<double> theta;
  std::vector<double> g;
};

enum class SpectrumKind { pure_point, atom_plus_ac, estimated };

[[nodiscard]] std::string_view to_string(SpectrumKind kind) noexcept;

struct DiffractionSpectrum {
  std::vector<Atom> atoms;
  std::optional<DensityGrid> density;
  SpectrumKind kind = SpectrumKind::pure_point;
  // Xi(0) minus the mass accounted for by atoms and density.
  double parseval_deficit = 0.0;

  [[nodiscard]] double atom_mass() const noexcept;
};

// Sorts by position and merges atoms closer than kPositionResolution on the
// circle. Masses add; the merged atom keeps the mode of smaller |m|.
void merge_atoms(std::vector<Atom>& atoms);

// DFT of the q orbit samples of eta_{q,w}: q atoms at (m p mod q)/q with
// mass |q^{-1} sum_k s_k e^{-2 pi i m k / q}|^2. Modes are the centered
// representatives of Z_q.
[[nodiscard]] DiffractionSpectrum rotation_diffraction_rational(std::int64_t p, std::int64_t q,
                                                                double w, const Observable& f);

// Atoms at frac(m alpha) with mass |f^(m)|^2 for |m| <= M. Masses below
// 1e-24 Xi(0) are dropped, so a constant observable yields a single atom.
[[nodiscard]] DiffractionSpectrum rotation_diffraction_irrational(double alpha,
                                                                  const Observable& f,
                                                                  std::int64_t max_mode);

// Atom (1/2)(int f h)^2 at 0 and g(theta) = c_0/2 + sum_{1<=z<=Z} c_z cos(2 pi theta z)
// on the grid j / grid_size. TruncationError when g dips below -1e-8.
[[nodiscard]] DiffractionSpectrum mixing_diffraction(const SpectralData& data,
                                                     std::size_t half_window,
                                                     std::size_t grid_size);
[[nodiscard]] DiffractionSpectrum mixing_diffraction(const IntervalMap& map, const Observable& f,
                                                     std::size_t n_bins, std::size_t half_window,
                                                     std::size_t grid_size);

// g_k(theta) = (1/24) (k - 1/k) / (k + 1/k - 2 cos 2 pi theta), the density for
// x -> kx mod 1 with f(x) = x.
[[nodiscard]] double linear_mod_density(int k, double theta);

// c_0/2 + sum_{1<=z<=Z} c_z cos(2 pi theta z)
[[nodiscard]] double density_series(const CoefficientSeq& c, std::size_t half_window,
                                    double theta);

struct EstimateOptions {
  std::size_t segments = 1;           // K; must divide N
  double threshold_factor = 5.0;      // atoms need P_N / N above this many medians
  double stability_tolerance = 0.5;   // max relative mass change per doubling
  double min_mass = 1e-12;
  OrbitOptions orbit;
};

// Periodogram-based estimate from the orbit samples f(T^n y), 0 <= n < N.
// Atom candidates are local maxima of |S_N(j/N)|^2 / N^2 above the threshold
// that stay above it, with stable mass, at the prefixes N/4 and N/2. The
// estimated mass is |S_N|^2 / N^2 (halved for non-invertible maps, matching
// the Xi convention) and the uncertainty is the change from the N/2 prefix.
// The density is the average over K segments of |S_L|^2 / L on the grid j/L,
// with the bins of detected atoms left out.
[[nodiscard]] DiffractionSpectrum estimate_spectrum(const IntervalMap& map, const Observable& f,
                                                    double y, std::int64_t horizon,
                                                    const EstimateOptions& options = {});

struct TopAtoms {
  std::vector<Atom> atoms;
  bool truncated = false;  // fewer atoms than requested
};

// Mass descending; ties by smaller |mode|, then positive mode first.
[[nodiscard]] TopAtoms top_atoms(const DiffractionSpectrum& spectrum, std::size_t count);

}  // namespace rtdiff
