#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sphq/polynomial.hpp"
#include "sphq/spin_models.hpp"

namespace sphq::cli {

/// Exit codes of the sphq executable.
inline constexpr int kExitPass = 0;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitConfig = 3;

/// Parses "64", "8,32,128" or the inclusive geometric grid "start:stop:factor".
/// The result must be strictly increasing. Throws ConfigError.
std::vector<int> parse_n_grid(const std::string& text);

/// Observables separated by ';', e.g. "x; z^2".
std::vector<SpherePolynomial> parse_f_list(const std::string& text);

struct RunConfig {
  std::string subcommand;

  std::string model = "cw";
  double J = 1.0;
  double B = 0.5;
  double lambda = 1.0;
  double gamma = 1.0;
  /// custom model: principal symbol and optional first-order correction
  std::string h0;
  std::string h1;

  std::vector<int> N_grid;
  std::vector<std::string> f_list;

  /// "ground" or a number (energy target)
  std::string state = "ground";
  double cap_radius = 0.3;
  double margin = 0.2;
  int N_small = 32;
  /// quantize output: "text" or "binary"
  std::string format = "text";
  /// husimi density grid resolution per axis
  int grid = 96;
  /// number of random samples in the axioms suite
  int samples = 50;

  std::string out_dir = "sphq-out";
  bool use_cache = true;
  std::uint64_t seed = 20240531;
  unsigned workers = 0;

  ModelSpec model_spec() const;
};

/// Every key accepted on the command line or in a config file.
const std::vector<std::string>& known_keys();

/// Applies key=value settings on top of cfg. Unknown keys and malformed values throw ConfigError.
void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings);

/// Reads "key=value" lines; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Splits "key=value" tokens. Throws ConfigError on a token without '='.
std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& tokens);

/// defaults < config file < command line.
RunConfig resolve_config(const std::string& subcommand, const std::optional<std::string>& config_file,
                         const std::vector<std::string>& assignments);

/// Default N grid of each subcommand when none is given.
std::vector<int> default_grid(const std::string& subcommand);

}  // namespace sphq::cli
