#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "photobio/grid.hpp"
#include "photobio/params.hpp"
#include "photobio/photoresponse.hpp"
#include "photobio/spectral.hpp"

namespace photobio {

/// Prognostic state at one time level. zeta and n are advanced; psi is
/// slaved to zeta through the Poisson solve and the bottom no-slip closure.
struct FieldSet {
    Field2D psi;
    Field2D zeta;
    Field2D n;
    double t = 0.0;
};

/// psi = zeta = 0, n = 1 + epsilon cos(pi x / lambda).
FieldSet initial_condition(const SimParams& params, const Grid& grid);

struct SteadyReport {
    bool steady = false;
    double residual = 0.0;
    double t_reached = 0.0;
    long steps = 0;
};

struct DiagnosticSample {
    double t = 0.0;
    double max_psi = 0.0;
    int roll_count = 0;
    int secondary_cells = 0;
    double mass = 0.0;
    double residual = 0.0;
    double mixing = 0.0;  // advective / diffusive vertical cell transport
};

/// AB2 / Crank-Nicolson stepper for the coupled vorticity and cell
/// conservation equations on a periodic-x channel.
///
/// Cell transport is finite-volume on node-centred cells (half cells on the
/// walls) with centred face fluxes, so the total cell count telescopes and
/// the wall fluxes J.z vanish identically. Advecting volume fluxes come from
/// corner values of psi, which makes the discrete velocity exactly
/// divergence-free. Diffusion of both n and zeta is Crank-Nicolson, solved
/// per x-Fourier mode; the bottom wall vorticity (Thom) is imposed
/// implicitly through a one-unknown capacitance correction per mode.
class Stepper {
public:
    /// R and lambda must be resolved.
    explicit Stepper(const SimParams& params);

    const Grid& grid() const { return grid_; }
    const SimParams& params() const { return params_; }
    const Photoresponse& taxis() const { return taxis_; }

    /// 0.4 min(dx/|u|max, dz/(|w|max + 0.9 Vc)).
    double cfl_limit(const FieldSet& state) const;
    /// min(params.dt, cfl_limit).
    double choose_dt(const FieldSet& state) const;

    /// Advance one step; returns the steadiness residual
    /// max(|d psi|, |d n|) / dt. Throws SolverError on CFL violation or
    /// non-finite values.
    double step(FieldSet& state, double dt);

    // Forget the previous explicit tendency; the next step is forward Euler.
    void reset_history() { have_history_ = false; }

    double mass(const FieldSet& state) const { return integrate(state.n, grid_); }
    double mixing(const FieldSet& state) const;

    /// Re-derive psi and the bottom-wall vorticity from interior zeta.
    void sync_stream_function(FieldSet& state);

private:
    void explicit_tendencies(const FieldSet& state);
    void corner_stream_function(const Field2D& psi);

    SimParams params_;
    Grid grid_;
    Photoresponse taxis_;
    double rayleigh_;
    PoissonSolver poisson_;

    Field2D light_, taxis_at_;
    std::vector<double> corner_;  // (nz + 2) levels x nx
    Field2D tend_n_, tend_zeta_, prev_n_, prev_zeta_;
    bool have_history_ = false;
    double prev_dt_ = 0.0;

    Field2D rhs_n_, rhs_zeta_;
    Modal modal_n_, modal_zeta_, modal_psi_;
    std::vector<std::complex<double>> col_a_, col_psi_;
    std::vector<double> col_b_, col_psi_b_, scratch_;
};

using SnapshotSink = std::function<void(const FieldSet&)>;

struct RunOptions {
    SnapshotSink on_snapshot;              // called every snapshot_interval of model time
    std::optional<FieldSet> initial;       // default: initial_condition
};

struct RunResult {
    FieldSet state;
    SteadyReport report;
    std::vector<DiagnosticSample> diagnostics;
};

/// Integrate until the residual drops below steady_tol or t reaches t_max.
/// Not reaching steadiness is reported, not thrown.
RunResult run_to_steady(const SimParams& params, const RunOptions& options = {});

}  // namespace photobio
