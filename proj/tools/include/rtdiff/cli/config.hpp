#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rtdiff/dynamics.hpp"
#include "rtdiff/observables.hpp"

namespace rtdiff::cli {

using Json = nlohmann::json;

// Reads the config file; parse failures become ConfigError with the
// line/column reported by the JSON parser.
[[nodiscard]] Json load_config(const std::filesystem::path& path);

// Typed access to one JSON object with range checks. Every failure is a
// ConfigError naming the dotted field path.
class Section {
 public:
  Section(const Json& node, std::string path);

  [[nodiscard]] bool has(std::string_view key) const;
  [[nodiscard]] std::string field(std::string_view key) const;

  [[nodiscard]] std::int64_t integer(std::string_view key, std::int64_t fallback, std::int64_t lo,
                                     std::int64_t hi) const;
  [[nodiscard]] std::int64_t integer(std::string_view key, std::int64_t lo, std::int64_t hi) const;
  [[nodiscard]] double number(std::string_view key, double fallback, double lo, double hi) const;
  [[nodiscard]] double number(std::string_view key, double lo, double hi) const;
  [[nodiscard]] bool boolean(std::string_view key, bool fallback) const;
  [[nodiscard]] std::string text(std::string_view key, std::string fallback) const;
  [[nodiscard]] std::string text(std::string_view key) const;
  [[nodiscard]] std::vector<double> numbers(std::string_view key) const;
  [[nodiscard]] std::vector<std::int64_t> integers(std::string_view key, std::int64_t lo,
                                                   std::int64_t hi) const;
  [[nodiscard]] std::vector<std::string> texts(std::string_view key) const;
  [[nodiscard]] std::vector<Section> sections(std::string_view key) const;
  // Sub-object; an absent key yields an empty section.
  [[nodiscard]] Section child(std::string_view key) const;

  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  [[nodiscard]] const Json* find(std::string_view key) const;
  [[nodiscard]] const Json& require(std::string_view key) const;

  const Json* node_;
  std::string path_;
};

struct MapChoice {
  IntervalMap map;
  std::string kind;  // linear_mod | rotation | rotation_rational | piecewise_affine
};

// {"type": "linear_mod", "k": 3}
// {"type": "rotation", "alpha": 0.15}          (declared irrational)
// {"type": "rotation_rational", "p": 1, "q": 2}
// {"type": "piecewise_affine", "branches": [{"lower", "upper", "slope", "intercept"}, ...]}
[[nodiscard]] MapChoice parse_map(const Section& root);

// {"type": "identity" | "zero" | "constant"(value) | "indicator"(a, b) |
//  "step"(breaks, values) | "poly"(coeffs)}; identity when absent.
[[nodiscard]] Observable parse_observable(const Section& root);

}  // namespace rtdiff::cli
