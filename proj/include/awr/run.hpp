#pragma once

#include "awr/config.hpp"
#include "awr/picard.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace awr {

enum ExitStatus : int {
    kExitOk = 0,
    kExitAuditFailure = 1,
    kExitConfigError = 2,
    kExitSolverAbort = 3,
};

struct RunOutcome {
    int status = kExitOk;
    std::string message;
    std::vector<SlabSummary> slabs;
};

/// Validates the config, marches it and writes into config.directory:
///
///   iterations.csv  "# awr-diagnostics v1": one row per Picard iteration,
///                   a "# slab <i> t=<start>" comment line before each slab
///   levels.csv      "# awr-levels v1": per time level of the final iterates
///   audit.csv       "# awr-audit v1": one row per slab
///   rho_<level>.awrs, w_<level>.awrs snapshots, rho_<level>.pgm for dim >= 2
///
/// Progress goes to `log`, failures to `err`. Status 0 needs a completed
/// march with every slab audit passing.
RunOutcome run(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Loads the file first; parse errors give status 2.
RunOutcome run_file(const std::string& path, std::ostream& log, std::ostream& err);

} // namespace awr
