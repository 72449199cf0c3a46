#include "rtdiff/io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "rtdiff/errors.hpp"

namespace rtdiff {

namespace {

constexpr std::string_view kCombMagic = "# rtdiff-comb v1";

void put_header(std::ostream& out, std::string_view header) {
  if (!header.empty()) out << header << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ArgumentError(fmt::format("line {}: '{}' is not a number", line_no, text));
  }
  return v;
}

std::int64_t parse_int(const std::string& text, std::size_t line_no) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ArgumentError(fmt::format("line {}: '{}' is not an integer", line_no, text));
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  return fmt::format("{:.17g}", value);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string csv_header(std::string_view command, std::uint64_t params_hash) {
  return fmt::format("# rtdiff v1 command={} params={:016x}", command, params_hash);
}

void write_comb_csv(std::ostream& out, const WeightedComb& comb, std::string_view header) {
  put_header(out, header);
  out << kCombMagic << " invertible=" << (comb.invertible_mode ? 1 : 0) << '\n';
  out << "z,weight\n";
  for (std::size_t i = 0; i < comb.weights.size(); ++i) {
    out << comb.origin_index + static_cast<std::int64_t>(i) << ',' << format_double(comb.weights[i])
        << '\n';
  }
}

WeightedComb read_comb_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# rtdiff v1", 0) == 0) continue;
    found = line.rfind(kCombMagic, 0) == 0;
    break;
  }
  if (!found) {
    throw ArgumentError("comb CSV must start with '" + std::string(kCombMagic) + "'");
  }
  WeightedComb comb;
  comb.invertible_mode = line.find("invertible=1") != std::string::npos;
  bool first_row = true;
  std::int64_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "z,weight") continue;
    const auto cells = split(line);
    if (cells.size() != 2) throw ArgumentError(fmt::format("line {}: expected z,weight", line_no));
    const std::int64_t z = parse_int(cells[0], line_no);
    if (first_row) {
      comb.origin_index = z;
      expected = z;
      first_row = false;
    }
    if (z != expected) {
      throw ArgumentError(fmt::format("line {}: lags must be consecutive, got {}", line_no, z));
    }
    comb.weights.push_back(parse_double(cells[1], line_no));
    ++expected;
  }
  comb.validate();
  return comb;
}

void write_xi_csv(std::ostream& out, const XiSequence& xi, std::string_view header) {
  put_header(out, header);
  out << "z,xi,engine\n";
  const auto z_max = static_cast<std::int64_t>(xi.half_window());
  for (std::int64_t z = -z_max; z <= z_max; ++z) {
    out << z << ',' << format_double(xi(z)) << ',' << to_string(xi.engine) << '\n';
  }
}

XiSequence read_xi_csv(std::istream& in) {
  std::map<std::int64_t, double> rows;
  std::optional<XiEngine> engine;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line == "z,xi,engine") continue;
    const auto cells = split(line);
    if (cells.size() != 3) {
      throw ArgumentError(fmt::format("line {}: expected z,xi,engine", line_no));
    }
    const auto e = parse_xi_engine(cells[2]);
    if (!e) throw ArgumentError(fmt::format("line {}: unknown engine '{}'", line_no, cells[2]));
    if (engine && *engine != *e) throw ArgumentError("mixed engines in one Xi file");
    engine = e;
    if (!rows.emplace(parse_int(cells[0], line_no), parse_double(cells[1], line_no)).second) {
      throw ArgumentError(fmt::format("line {}: duplicate lag", line_no));
    }
  }
  if (rows.empty()) throw ArgumentError("Xi file has no rows");
  const auto z_max = rows.rbegin()->first;
  if (z_max < 0 || rows.begin()->first != -z_max ||
      rows.size() != static_cast<std::size_t>(2 * z_max + 1)) {
    throw DimensionError("Xi file must cover [-Z, Z] without gaps");
  }
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto& [z, v] : rows) values.push_back(v);
  return {CoefficientSeq(static_cast<std::size_t>(z_max), std::move(values)), *engine};
}

void write_coefficients_csv(std::ostream& out, const CoefficientSeq& c, std::string_view header) {
  put_header(out, header);
  out << "z,c_z\n";
  const auto z_max = static_cast<std::int64_t>(c.half_window());
  for (std::int64_t z = -z_max; z <= z_max; ++z) out << z << ',' << format_double(c(z)) << '\n';
}

void write_atoms_csv(std::ostream& out, std::span<const Atom> atoms, std::string_view header) {
  put_header(out, header);
  out << "position,mass,mode_index\n";
  for (const Atom& a : atoms) {
    out << format_double(a.position) << ',' << format_double(a.mass) << ',' << a.mode << '\n';
  }
}

void write_density_csv(std::ostream& out, const DensityGrid& density, std::string_view header) {
  put_header(out, header);
  out << "theta,g\n";
  for (std::size_t i = 0; i < density.theta.size(); ++i) {
    out << format_double(density.theta[i]) << ',' << format_double(density.g[i]) << '\n';
  }
}

}  // namespace rtdiff
