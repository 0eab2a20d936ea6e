#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "sphq/errors.hpp"
#include "sphq_cli/commands.hpp"
#include "sphq_cli/config.hpp"

int main(int argc, char** argv) {
  using namespace sphq::cli;
  CLI::App app{"Spin coherent-state quantization of the sphere and mean-field spin models"};
  app.require_subcommand(1);
  std::string config_file;
  bool no_cache = false;
  app.add_option("--config", config_file, "key=value config file (command-line keys take precedence)");
  app.add_flag("--no-cache", no_cache, "bypass the on-disk result cache");

  const std::vector<std::pair<std::string, std::string>> help = {
      {"axioms", "random-polynomial checks of the quantization axioms"},
      {"quantize", "write Q(f) for each N (f=..., format=text|binary)"},
      {"spectrum", "distance from ran(h0) to the spectrum along an N grid"},
      {"limit", "expectations in an eigenvector sequence against the predicted limit state"},
      {"dgr", "calibrate the commutator convention and record DGR/product defects"},
      {"husimi", "Husimi density grids, cap masses and forbidden-region masses"},
      {"ssb", "Z2 symmetry-breaking report"},
      {"fit-symbol", "least-squares first-order symbol of the Hamiltonian"},
      {"repro", "run every acceptance criterion and write a summary table"}};
  std::vector<std::string> settings;
  for (const auto& [name, desc] : help) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("settings", settings, "key=value settings");
    sub->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg = resolve_config(subcommand, config_file.empty() ? std::nullopt : std::optional(config_file), settings);
    if (no_cache) cfg.use_cache = false;
    return run(cfg, std::cout);
  } catch (const sphq::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sphq::PreconditionError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sphq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}
