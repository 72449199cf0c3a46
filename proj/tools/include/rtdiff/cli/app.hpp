#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "rtdiff/cli/config.hpp"

namespace rtdiff::cli {

enum class Command { xi, diffract, periodogram, converge, fig1, fig2 };

[[nodiscard]] std::string_view to_string(Command command) noexcept;
[[nodiscard]] std::optional<Command> parse_command(std::string_view name) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

struct RunRequest {
  Command command = Command::xi;
  Json config = Json::object();
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides config["seed"]
};

// Validates the whole config, computes, then writes every output file.
// Throws ConfigError for invalid configs and other rtdiff::Error types for
// numerical failures. Returns the written files in write order.
std::vector<std::filesystem::path> run_command(const RunRequest& request);

// `rtdiff <command> --config <path> [--out <dir>] [--seed <u64>]`
// Returns 0 on success, 2 on config or usage errors, 1 on numerical errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rtdiff::cli
