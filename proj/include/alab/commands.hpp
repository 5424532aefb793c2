#pragma once

// annulus-lab subcommands. Each writes its outputs under cfg.out and returns
// the process exit code; configuration and domain problems surface as
// ConfigError / DomainError, solver failures as SolverError.

#include <iosfwd>
#include <string>

#include "alab/config.hpp"

namespace alab {

enum ExitCode : int {
  kExitPass = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitBreach = 3,
};

inline constexpr double kIdentityTolerance = 1e-12;

int cmd_identities(const RunConfig& cfg, std::ostream& log);
int cmd_quenched(const RunConfig& cfg, std::ostream& log);
int cmd_annealed(const RunConfig& cfg, std::ostream& log);
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_fit(const RunConfig& cfg, std::ostream& log);

/// Dispatches by name and maps exceptions to exit codes; messages go to `err`.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log,
                std::ostream& err);

}  // namespace alab
