#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sphq_cli/config.hpp"

namespace sphq::cli {

/// Subcommand names in help order.
const std::vector<std::string>& subcommands();

/// Runs one subcommand. Artifacts go to cfg.out_dir, per-check diagnostics to
/// <out_dir>/sphq.log and a short summary to `out`. Returns an exit code; ConfigError and
/// PreconditionError propagate (exit 3), NumericalError propagates (exit 2).
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace sphq::cli
