#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/combs.hpp"
#include "rtdiff/diffraction.hpp"

namespace rtdiff {

// 17 significant digits: doubles survive a text round trip bit for bit.
[[nodiscard]] std::string format_double(double value);

// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// "# rtdiff v1 command=<command> params=<16 hex digits>"
[[nodiscard]] std::string csv_header(std::string_view command, std::uint64_t params_hash);

// Every writer emits `header` (when non-empty) as the first line.

// "# rtdiff-comb v1 invertible=<0|1>" (after the optional header), then
// "z,weight" rows.
void write_comb_csv(std::ostream& out, const WeightedComb& comb, std::string_view header = {});
[[nodiscard]] WeightedComb read_comb_csv(std::istream& in);

void write_xi_csv(std::ostream& out, const XiSequence& xi, std::string_view header = {});
// Reads rows (z, xi, engine); z must cover [-Z, Z] exactly once.
[[nodiscard]] XiSequence read_xi_csv(std::istream& in);

void write_coefficients_csv(std::ostream& out, const CoefficientSeq& c,
                            std::string_view header = {});
void write_atoms_csv(std::ostream& out, std::span<const Atom> atoms, std::string_view header = {});
void write_density_csv(std::ostream& out, const DensityGrid& density, std::string_view header = {});

}  // namespace rtdiff
