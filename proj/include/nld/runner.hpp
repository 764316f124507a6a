#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nld/asymptotics.hpp"
#include "nld/config.hpp"

namespace nld {

struct CheckOutcome {
    std::string name;
    std::string status; // pass | fail | skipped
    std::string reason; // failure detail or skip reason
    long wall_ms = 0;
};

struct RunResult {
    std::vector<CheckOutcome> checks;
    int exit_code = 0; // 0 all pass, 1 any failure
};

std::string version_string();

// Plot-ready decay data: (t, raw, scaled) and (log10 t, log10 raw) files for
// the report's p. Tolerates an empty report (header-only files).
void emit_plotdata(const DecayReport& report, const std::string& out_dir);

/// Executes every requested check, writes one CSV per check plus the run
/// manifest into the output directory, and returns the per-check outcomes.
RunResult run_experiment(ExperimentConfig cfg, const std::optional<std::string>& out_override,
                         const std::optional<std::uint64_t>& seed_override);

} // namespace nld
