#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace photobio {

// Which of {beta, I_c} the user supplied; the other one is derived.
enum class PhotoInput { critical_intensity, beta };

/// Nondimensional control parameters plus numerical settings for one run.
///
/// Rayleigh number and domain width may be left pending (R given as a
/// multiple of R_c, width as the critical wavelength); resolve_onset()
/// fills them in from a linear-stability summary.
struct SimParams {
    double Sc = 20.0;
    double Vc = 10.0;
    double kappa = 0.5;
    std::optional<double> R;
    std::optional<double> R_mult;
    double I_t = 0.8;

    PhotoInput photo_input = PhotoInput::critical_intensity;
    double beta = 0.0;
    double I_c = 0.66;

    std::optional<double> lambda;  // empty: use the critical wavelength
    double epsilon = 1e-5;

    int Nx = 128;
    int Nz = 64;
    double dt = 1e-3;  // upper cap; the stepper shortens it to satisfy CFL
    double t_max = 60.0;
    double steady_tol = 1e-8;
    double snapshot_interval = 0.0;  // 0 writes the final state only
    int diag_every = 200;

    double k_min = 0.5;
    double k_max = 20.0;
    int k_samples = 64;
    int linstab_nz = 0;  // 0: same z-grid as the nonlinear solver

    std::string onset_summary;  // path to a critical.txt to reuse

    // Keys that were not present in the document and took their default.
    std::vector<std::string> defaulted;

    bool rayleigh_resolved() const { return R.has_value(); }
    bool width_resolved() const { return lambda.has_value(); }
    bool needs_onset() const { return !R.has_value() || !lambda.has_value(); }

    // Throw ConfigError when still pending.
    double rayleigh() const;
    double width() const;
};

// Value equality; provenance (the defaulted list) is not compared.
bool operator==(const SimParams& a, const SimParams& b);

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Parse `key = value` lines with `#` comments. Duplicate keys are errors.
KeyValues parse_key_values(std::string_view text);

SimParams load_config(std::string_view text);

/// `overrides` are `key=val` strings applied on top of the document.
SimParams load_config(std::string_view text, const std::vector<std::string>& overrides);

SimParams load_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

std::string serialize(const SimParams& params);

/// One-line linear-stability summary: `k_c=... R_c=... lambda_c=...`.
struct CriticalSummary {
    double k_c = 0.0;
    double R_c = 0.0;
    double lambda_c = 0.0;
};

std::string format_summary(const CriticalSummary& summary);
CriticalSummary parse_summary(std::string_view text);

/// Resolve R from R_mult and a pending width from the critical wavelength.
SimParams resolve_onset(SimParams params, const CriticalSummary& summary);

// FNV-1a over the serialized parameters; stamped into snapshot headers.
std::uint64_t params_hash(const SimParams& params);

}  // namespace photobio
