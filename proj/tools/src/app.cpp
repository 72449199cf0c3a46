#include "rtdiff/cli/app.hpp"

#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "rtdiff/errors.hpp"

namespace rtdiff::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Autocorrelation and diffraction of return time measures", "rtdiff"};
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  app.add_option("command", command, "xi | diffract | periodogram | converge | fig1 | fig2")
      ->required();
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  auto* seed_option = app.add_option("--seed", seed, "RNG seed; overrides the config value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rtdiff: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const auto parsed = parse_command(command);
    if (!parsed) throw ConfigError("command", "unknown command '" + command + "'");
    RunRequest request;
    request.command = *parsed;
    request.out_dir = out_dir;
    if (seed_option->count() > 0) request.seed = seed;
    if (!config_path.empty()) {
      request.config = load_config(config_path);
    } else if (*parsed != Command::fig1 && *parsed != Command::fig2) {
      throw ConfigError("--config", "required for '" + command + "'");
    }
    for (const auto& path : run_command(request)) out << path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "rtdiff: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "rtdiff: numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "rtdiff: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace rtdiff::cli
