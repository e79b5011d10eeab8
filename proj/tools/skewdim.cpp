#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "skewdim/commands.hpp"
#include "skewdim/config.hpp"
#include "skewdim/errors.hpp"
#include "skewdim/report.hpp"

namespace {

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fiber Poincare series, escape measures and Schottky exponents for symbolic group extensions"};
  app.set_version_flag("--version", "skewdim " + skewdim::tool_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::string format;

  // Environment values act as defaults; explicit flags take precedence.
  if (const char* v = env("SKEWDIM_CONFIG")) config_path = v;
  if (const char* v = env("SKEWDIM_FORMAT")) format = v;
  if (const char* v = env("SKEWDIM_OUT")) out_dir = v;

  app.add_option("--config", config_path, "JSON run configuration (env SKEWDIM_CONFIG)");
  app.add_option("--out", out_dir, "output directory (env SKEWDIM_OUT)");
  app.add_option("--threads", threads, "worker threads for orbit enumeration (env SKEWDIM_THREADS)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--seed", seed, "random seed (env SKEWDIM_SEED)");
  app.add_option("--format", format, "artifact format: json or csv (env SKEWDIM_FORMAT)")
      ->check(CLI::IsMember({"json", "csv"}));

  const std::vector<std::pair<std::string, std::string>> help{
      {"validate", "check the system, projection, transitivity and symmetry"},
      {"series", "truncated fiber Poincare series"},
      {"exponent", "restricted critical exponent estimate"},
      {"measure", "escape construction and measure tree"},
      {"cover", "covering sums near a boundary point"},
      {"schottky", "full Schottky group report"},
      {"verify", "invariant suite with a pass/fail table"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : skewdim::kExitError;
  }

  try {
    if (!threads)
      if (const char* v = env("SKEWDIM_THREADS")) threads = std::stoi(v);
    if (!seed)
      if (const char* v = env("SKEWDIM_SEED")) seed = std::stoull(v);
    if (format.size() && format != "json" && format != "csv")
      throw skewdim::InputError("format", "expected json or csv, got '" + format + "'");
  } catch (const std::logic_error& e) {
    std::cerr << "error: bad environment override: " << e.what() << "\n";
    return skewdim::kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  skewdim::RunConfig cfg;
  try {
    if (config_path.empty()) {
      if (command != "verify") {
        std::cerr << "error: --config is required for '" << command << "'\n";
        return skewdim::kExitError;
      }
      cfg = skewdim::default_verify_config();
    } else {
      cfg = skewdim::load_config(config_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return skewdim::kExitError;
  }
  if (threads) cfg.threads = *threads;
  if (seed) cfg.seed = *seed;

  skewdim::CommandOptions opt;
  opt.out = out_dir.empty() ? cfg.output_dir : out_dir;
  if (format == "json") opt.format = skewdim::OutputFormat::Json;
  if (format == "csv") opt.format = skewdim::OutputFormat::Csv;
  return skewdim::run_command(command, cfg, opt, std::cout, std::cerr);
}
