// Command-line front end: parses flags, loads the experiment config, and
// delegates to cli::run_subcommand. Exit codes: 0 success, 1 validation
// error, 2 completed with degenerate-result warnings.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "anderson1d/cli.hpp"
#include "anderson1d/errors.hpp"
#include "anderson1d/parallel.hpp"
#include "anderson1d/version.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::string out_prefix;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw anderson::ConfigError("", "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for 1D continuum Anderson models: "
               "transfer-matrix cocycles, Lyapunov exponents, positivity "
               "certificates, exceptional-energy scans and large-deviation "
               "tails"};
  app.set_version_flag("--version", std::string("anderson1d ") +
                                        anderson::kVersion);
  app.require_subcommand(1);

  std::vector<std::pair<CLI::App*, std::shared_ptr<SubArgs>>> subs;
  for (const std::string& name : anderson::cli::subcommands()) {
    auto args = std::make_shared<SubArgs>();
    args->out_prefix = name + "_";
    CLI::App* sub = app.add_subcommand(name, "");
    sub->add_option("--config", args->config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args->out_prefix,
                    "output path prefix (default: <subcommand>_)");
    sub->add_option("--seed", args->seed, "override the config seed")
        ->each([args](const std::string&) { args->seed_set = true; });
    sub->add_option("--threads", args->threads,
                    "worker cap; capacity hint only, never affects results");
    subs.emplace_back(sub, args);
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& [sub, args] : subs) {
    if (!sub->parsed()) continue;
    try {
      anderson::cli::ExperimentConfig cfg =
          anderson::cli::parse_config(read_file(args->config_path));
      if (args->seed_set) cfg.seed = args->seed;
      if (args->threads > 0) anderson::par::set_max_threads(args->threads);

      const anderson::cli::RunResult result =
          anderson::cli::run_subcommand(sub->get_name(), cfg, args->out_prefix);
      for (const std::string& w : result.warnings) {
        std::cerr << "warning: " << w << "\n";
      }
      for (const std::string& f : result.files) {
        std::cout << f << "\n";
      }
      return result.exit_code;
    } catch (const anderson::ConfigError& err) {
      std::cerr << "config error: " << err.what() << "\n";
      return anderson::cli::kExitValidationError;
    } catch (const std::exception& err) {
      std::cerr << "error: " << err.what() << "\n";
      return anderson::cli::kExitValidationError;
    }
  }
  return anderson::cli::kExitValidationError;  // unreachable
}
