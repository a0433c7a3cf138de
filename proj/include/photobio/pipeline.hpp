#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "photobio/linstab.hpp"
#include "photobio/params.hpp"
#include "photobio/rolls.hpp"
#include "photobio/stepper.hpp"

namespace photobio {

enum class Mode { basic, onset, simulate, sweep };

Mode parse_mode(std::string_view name);

struct PipelineOptions {
    Mode mode = Mode::simulate;
    std::filesystem::path config;
    std::filesystem::path out = ".";
    std::vector<double> r_mult;  // simulate: at most one; sweep: replaces the catalogue
    std::vector<std::string> overrides;
};

/// R_c multiples of the steady-solution catalogue, 1.5 R_c to 100 R_c.
std::vector<double> catalogue_multiples();

/// Critical summary from params.onset_summary if set, else a fresh
/// neutral-curve computation (written to `out` when given).
CriticalSummary onset_summary(const SimParams& params,
                              const std::optional<std::filesystem::path>& out = std::nullopt);

struct SimulationOutcome {
    SimParams params;  // resolved
    RunResult run;
    RollCount rolls;
};

/// Run to steadiness writing diagnostics.csv, summary.txt, params.cfg,
/// metadata.json, final.bin and cadence snapshots into `out`.
SimulationOutcome simulate(const SimParams& resolved, const std::filesystem::path& out);

void write_diagnostics_csv(const std::vector<DiagnosticSample>& samples, std::ostream& out);

/// Executes one CLI mode. Returns the process exit status; failures are
/// reported as a JSON error record on `err` and in out/error.json.
int run_pipeline(const PipelineOptions& options, std::ostream& log, std::ostream& err);

}  // namespace photobio
