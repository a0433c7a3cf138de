#include "photobio/stepper.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "photobio/error.hpp"
#include "photobio/rolls.hpp"

namespace photobio {

namespace {
constexpr double cfl_safety = 0.4;
constexpr double max_taxis = 0.9;  // |M| <= 0.9 for the sine superposition

bool all_finite(const Field2D& f) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}
}  // namespace

FieldSet initial_condition(const SimParams& params, const Grid& grid) {
    FieldSet s{Field2D(grid), Field2D(grid), Field2D(grid), 0.0};
    for (int j = 0; j < grid.rows(); ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            s.n(i, j) = 1.0 + params.epsilon * std::cos(std::numbers::pi * grid.x(i) / grid.width);
        }
    }
    return s;
}

Stepper::Stepper(const SimParams& params)
    : params_(params),
      grid_(params.Nx, params.Nz, params.width()),
      taxis_(make_photoresponse(params)),
      rayleigh_(params.rayleigh()),
      poisson_(grid_),
      light_(grid_),
      taxis_at_(grid_),
      corner_(static_cast<std::size_t>(grid_.nz + 2) * grid_.nx, 0.0),
      tend_n_(grid_),
      tend_zeta_(grid_),
      prev_n_(grid_),
      prev_zeta_(grid_),
      rhs_n_(grid_),
      rhs_zeta_(grid_) {
    if (grid_.dz() * params.Vc * max_taxis >= 2.0) {
        throw ConfigError("stepper: cell Peclet number dz*Vc*0.9 must be < 2; refine Nz");
    }
}

void Stepper::corner_stream_function(const Field2D& psi) {
    const int nx = grid_.nx;
    const int nz = grid_.nz;
    // Level k holds psi at (x_{i+1/2}, z_{k-1/2}); levels 0 and nz+1 are the walls.
    for (int i = 0; i < nx; ++i) {
        corner_[i] = 0.0;
        corner_[static_cast<std::size_t>(nz + 1) * nx + i] = 0.0;
    }
    for (int k = 1; k <= nz; ++k) {
        const auto lo = psi.row(k - 1);
        const auto hi = psi.row(k);
        double* c = corner_.data() + static_cast<std::size_t>(k) * nx;
        for (int i = 0; i < nx; ++i) {
            const int ip = i + 1 == nx ? 0 : i + 1;
            c[i] = 0.25 * (lo[i] + lo[ip] + hi[i] + hi[ip]);
        }
    }
}

double Stepper::cfl_limit(const FieldSet& state) const {
    const int nx = grid_.nx;
    const int nz = grid_.nz;
    const double dx = grid_.dx();
    const double dz = grid_.dz();
    const Field2D& psi = state.psi;
    double umax = 0.0;
    double wmax = 0.0;
    for (int j = 0; j <= nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ip = grid_.wrap(i + 1);
            if (j < nz) {
                umax = std::max(umax, std::abs(psi(i, j + 1) - psi(i, j)) / dz);
            }
            wmax = std::max(wmax, std::abs(psi(ip, j) - psi(i, j)) / dx);
        }
    }
    const double limit_x = umax > 0 ? dx / umax : std::numeric_limits<double>::infinity();
    const double limit_z = dz / (wmax + max_taxis * params_.Vc);
    return cfl_safety * std::min(limit_x, limit_z);
}

double Stepper::choose_dt(const FieldSet& state) const {
    return std::min(params_.dt, cfl_limit(state));
}

void Stepper::explicit_tendencies(const FieldSet& state) {
    const int nx = grid_.nx;
    const int nz = grid_.nz;
    const double dx = grid_.dx();
    const double dz = grid_.dz();
    const double Vc = params_.Vc;
    const double buoyancy = params_.Sc * rayleigh_ / (2.0 * dx);

    light_ = light_field(state.n, grid_, params_.kappa, params_.I_t);
    {
        auto in = light_.values();
        auto out = taxis_at_.values();
        for (std::size_t k = 0; k < in.size(); ++k) out[k] = taxis_(in[k]);
    }
    corner_stream_function(state.psi);

    const Field2D& n = state.n;
    const Field2D& zeta = state.zeta;
    std::vector<double> fz_below(nx, 0.0), fz_above(nx, 0.0);
    std::vector<double> gz_below(nx, 0.0), gz_above(nx, 0.0);

    for (int j = 0; j <= nz; ++j) {
        const double* c_lo = corner_.data() + static_cast<std::size_t>(j) * nx;
        const double* c_hi = corner_.data() + static_cast<std::size_t>(j + 1) * nx;

        // Vertical fluxes through the face above row j.
        if (j < nz) {
            for (int i = 0; i < nx; ++i) {
                const int im = i == 0 ? nx - 1 : i - 1;
                const double volume_flux = -(c_hi[i] - c_hi[im]);
                const double n_face = 0.5 * (n(i, j) + n(i, j + 1));
                const double m_face = 0.5 * (taxis_at_(i, j) + taxis_at_(i, j + 1));
                fz_above[i] = (volume_flux + dx * Vc * m_face) * n_face;
                gz_above[i] = volume_flux * 0.5 * (zeta(i, j) + zeta(i, j + 1));
            }
        } else {
            std::fill(fz_above.begin(), fz_above.end(), 0.0);
        }

        const double h = (j == 0 || j == nz) ? 0.5 * dz : dz;
        const double inv_volume = 1.0 / (dx * h);
        for (int i = 0; i < nx; ++i) {
            const int im = i == 0 ? nx - 1 : i - 1;
            const int ip = i + 1 == nx ? 0 : i + 1;
            const double ux_right = c_hi[i] - c_lo[i];
            const double ux_left = c_hi[im] - c_lo[im];
            const double fx_right = ux_right * 0.5 * (n(i, j) + n(ip, j));
            const double fx_left = ux_left * 0.5 * (n(im, j) + n(i, j));
            tend_n_(i, j) = -(fx_right - fx_left + fz_above[i] - fz_below[i]) * inv_volume;

            if (j > 0 && j < nz) {
                const double gx_right = ux_right * 0.5 * (zeta(i, j) + zeta(ip, j));
                const double gx_left = ux_left * 0.5 * (zeta(im, j) + zeta(i, j));
                tend_zeta_(i, j) = -(gx_right - gx_left + gz_above[i] - gz_below[i]) * inv_volume -
                                   buoyancy * (n(ip, j) - n(im, j));
            } else {
                tend_zeta_(i, j) = 0.0;
            }
        }
        std::swap(fz_below, fz_above);
        std::swap(gz_below, gz_above);
    }
}

double Stepper::step(FieldSet& state, double dt) {
    const int nx = grid_.nx;
    const int nz = grid_.nz;
    const double dx = grid_.dx();
    const double dz = grid_.dz();
    const double idx2 = 1.0 / (dx * dx);
    const double idz2 = 1.0 / (dz * dz);
    const double sc = params_.Sc;

    if (!(dt > 0)) throw SolverError("step: dt must be positive");
    const double limit = cfl_limit(state);
    if (dt > limit * (1.0 + 1e-12)) {
        throw SolverError("step: CFL violation at t = " + std::to_string(state.t) + ": dt = " +
                          std::to_string(dt) + " exceeds bound " + std::to_string(limit));
    }

    explicit_tendencies(state);

    // Variable-step AB2 weights.
    double w_now = 1.0;
    double w_old = 0.0;
    if (have_history_) {
        const double r = dt / prev_dt_;
        w_now = 1.0 + 0.5 * r;
        w_old = -0.5 * r;
    }

    const Field2D& n = state.n;
    const Field2D& zeta = state.zeta;
    for (int j = 0; j <= nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int im = i == 0 ? nx - 1 : i - 1;
            const int ip = i + 1 == nx ? 0 : i + 1;
            double lz;
            if (j == 0) {
                lz = 2.0 * (n(i, 1) - n(i, 0)) * idz2;
            } else if (j == nz) {
                lz = 2.0 * (n(i, nz - 1) - n(i, nz)) * idz2;
            } else {
                lz = (n(i, j + 1) - 2.0 * n(i, j) + n(i, j - 1)) * idz2;
            }
            const double lap_n = (n(ip, j) - 2.0 * n(i, j) + n(im, j)) * idx2 + lz;
            rhs_n_(i, j) = n(i, j) + 0.5 * dt * lap_n +
                           dt * (w_now * tend_n_(i, j) + w_old * prev_n_(i, j));

            if (j > 0 && j < nz) {
                const double lap_zeta = (zeta(ip, j) - 2.0 * zeta(i, j) + zeta(im, j)) * idx2 +
                                        (zeta(i, j + 1) - 2.0 * zeta(i, j) + zeta(i, j - 1)) * idz2;
                rhs_zeta_(i, j) = zeta(i, j) + 0.5 * dt * sc * lap_zeta +
                                  dt * (w_now * tend_zeta_(i, j) + w_old * prev_zeta_(i, j));
            } else {
                rhs_zeta_(i, j) = 0.0;
            }
        }
    }

    ModalTransform& fft = poisson_.transform();
    const int modes = fft.modes();
    auto at = [modes](int j, int m) { return static_cast<std::size_t>(j) * modes + m; };

    // Cells: (I - dt/2 L) n' = rhs with half-cell Neumann rows at the walls.
    fft.forward(rhs_n_, modal_n_);
    {
        Tridiagonal op(nz + 1);
        col_a_.resize(nz + 1);
        const double theta = 0.5 * dt;
        for (int m = 0; m < modes; ++m) {
            const double s = fft.symbol(m);
            for (int j = 0; j <= nz; ++j) {
                op.diag[j] = 1.0 + theta * (2.0 * idz2 + s);
                op.lower[j] = -theta * idz2;
                op.upper[j] = -theta * idz2;
            }
            op.upper[0] = -2.0 * theta * idz2;
            op.lower[nz] = -2.0 * theta * idz2;
            for (int j = 0; j <= nz; ++j) col_a_[j] = modal_n_[at(j, m)];
            op.solve(std::span(col_a_), scratch_);
            for (int j = 0; j <= nz; ++j) modal_n_[at(j, m)] = col_a_[j];
        }
    }

    // Vorticity and stream function together, wall vorticity implicit:
    // zeta = zeta_a + z0 zeta_b, psi = psi_a + z0 psi_b, z0 = -2 psi_1 / dz^2.
    fft.forward(rhs_zeta_, modal_zeta_);
    modal_psi_.assign(modal_zeta_.size(), 0.0);
    {
        const int interior = nz - 1;
        Tridiagonal op(interior);
        col_a_.resize(interior);
        col_psi_.resize(interior);
        col_b_.resize(interior);
        col_psi_b_.resize(interior);
        const double theta = 0.5 * dt * sc;
        for (int m = 0; m < modes; ++m) {
            const double s = fft.symbol(m);
            for (int r = 0; r < interior; ++r) {
                op.diag[r] = 1.0 + theta * (2.0 * idz2 + s);
                op.lower[r] = -theta * idz2;
                op.upper[r] = -theta * idz2;
            }
            for (int r = 0; r < interior; ++r) col_a_[r] = modal_zeta_[at(r + 1, m)];
            std::fill(col_b_.begin(), col_b_.end(), 0.0);
            col_b_[0] = theta * idz2;
            op.solve(std::span(col_a_), scratch_);
            op.solve(std::span(col_b_), scratch_);

            col_psi_ = col_a_;
            col_psi_b_ = col_b_;
            const Tridiagonal& poisson = poisson_.mode_operator(m);
            poisson.solve(std::span(col_psi_), scratch_);
            poisson.solve(std::span(col_psi_b_), scratch_);

            const std::complex<double> wall =
                -2.0 * idz2 * col_psi_[0] / (1.0 + 2.0 * idz2 * col_psi_b_[0]);
            modal_zeta_[at(0, m)] = wall;
            modal_zeta_[at(nz, m)] = 0.0;
            for (int r = 0; r < interior; ++r) {
                modal_zeta_[at(r + 1, m)] = col_a_[r] + wall * col_b_[r];
                modal_psi_[at(r + 1, m)] = col_psi_[r] + wall * col_psi_b_[r];
            }
        }
    }

    // Reuse the RHS buffers for the new fields.
    fft.inverse(modal_n_, rhs_n_);
    fft.inverse(modal_zeta_, rhs_zeta_);
    Field2D psi_new(grid_);
    fft.inverse(modal_psi_, psi_new);

    if (!all_finite(rhs_n_) || !all_finite(rhs_zeta_) || !all_finite(psi_new)) {
        throw SolverError("step: non-finite field at t = " + std::to_string(state.t + dt));
    }

    double change = 0.0;
    {
        auto a = psi_new.values();
        auto b = state.psi.values();
        for (std::size_t k = 0; k < a.size(); ++k) change = std::max(change, std::abs(a[k] - b[k]));
        auto c = rhs_n_.values();
        auto d = state.n.values();
        for (std::size_t k = 0; k < c.size(); ++k) change = std::max(change, std::abs(c[k] - d[k]));
    }

    std::swap(state.n, rhs_n_);
    std::swap(state.zeta, rhs_zeta_);
    state.psi = std::move(psi_new);
    state.t += dt;

    std::swap(prev_n_, tend_n_);
    std::swap(prev_zeta_, tend_zeta_);
    prev_dt_ = dt;
    have_history_ = true;
    return change / dt;
}

void Stepper::sync_stream_function(FieldSet& state) {
    for (int i = 0; i < grid_.nx; ++i) {
        state.zeta(i, 0) = 0.0;
        state.zeta(i, grid_.nz) = 0.0;
    }
    poisson_.solve(state.zeta, state.psi);
    const double idz2 = 1.0 / (grid_.dz() * grid_.dz());
    for (int i = 0; i < grid_.nx; ++i) state.zeta(i, 0) = -2.0 * state.psi(i, 1) * idz2;
    have_history_ = false;
}

double Stepper::mixing(const FieldSet& state) const {
    const int nx = grid_.nx;
    const int nz = grid_.nz;
    const double dx = grid_.dx();
    const double dz = grid_.dz();
    const Field2D& psi = state.psi;
    const Field2D& n = state.n;
    double advective = 0.0;
    double diffusive = 0.0;
    for (int j = 0; j < nz; ++j) {
        double mean = 0.0;
        for (int i = 0; i < nx; ++i) mean += 0.5 * (n(i, j) + n(i, j + 1));
        mean /= nx;
        for (int i = 0; i < nx; ++i) {
            const int ip = grid_.wrap(i + 1);
            const int im = grid_.wrap(i - 1);
            const double w = -(psi(ip, j) + psi(ip, j + 1) - psi(im, j) - psi(im, j + 1)) / (4.0 * dx);
            advective += std::abs(w * (0.5 * (n(i, j) + n(i, j + 1)) - mean));
            diffusive += std::abs(n(i, j + 1) - n(i, j)) / dz;
        }
    }
    return diffusive > 0 ? advective / diffusive : 0.0;
}

RunResult run_to_steady(const SimParams& params, const RunOptions& options) {
    Stepper stepper(params);
    RunResult result;
    result.state = options.initial ? *options.initial : initial_condition(params, stepper.grid());
    const Grid& grid = stepper.grid();

    double residual = std::numeric_limits<double>::infinity();
    auto sample = [&] {
        const auto rolls = count_rolls(result.state.psi, grid);
        result.diagnostics.push_back({result.state.t, max_abs(result.state.psi), rolls.primary_rolls,
                                      rolls.secondary_cells, stepper.mass(result.state), residual,
                                      stepper.mixing(result.state)});
    };

    sample();
    long steps = 0;
    double next_snapshot = params.snapshot_interval;
    bool steady = false;
    while (result.state.t < params.t_max) {
        double dt = stepper.choose_dt(result.state);
        dt = std::min(dt, params.t_max - result.state.t);
        residual = stepper.step(result.state, dt);
        ++steps;
        if (steps % params.diag_every == 0) sample();
        if (options.on_snapshot && params.snapshot_interval > 0 && result.state.t >= next_snapshot) {
            options.on_snapshot(result.state);
            next_snapshot += params.snapshot_interval;
        }
        if (residual < params.steady_tol) {
            steady = true;
            break;
        }
    }
    if (steps % params.diag_every != 0) sample();
    result.report = {steady, residual, result.state.t, steps};
    return result;
}

}  // namespace photobio
