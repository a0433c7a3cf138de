#include "photobio/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace photobio {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct ModalTransform::Impl {
    Grid grid;
    int modes = 0;
    double* real = nullptr;
    fftw_complex* spectral = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Impl(const Grid& g) : grid(g), modes(g.nx / 2 + 1) {
        const int rows = g.rows();
        std::lock_guard lock(planner_mutex());
        real = fftw_alloc_real(static_cast<std::size_t>(g.nx) * rows);
        spectral = fftw_alloc_complex(static_cast<std::size_t>(modes) * rows);
        int n[] = {g.nx};
        // FFTW_ESTIMATE keeps plans (and so results) identical run to run.
        fwd = fftw_plan_many_dft_r2c(1, n, rows, real, nullptr, 1, g.nx, spectral, nullptr, 1,
                                     modes, FFTW_ESTIMATE);
        bwd = fftw_plan_many_dft_c2r(1, n, rows, spectral, nullptr, 1, modes, real, nullptr, 1,
                                     g.nx, FFTW_ESTIMATE);
    }
    ~Impl() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spectral);
    }
};

ModalTransform::ModalTransform(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
ModalTransform::~ModalTransform() = default;
ModalTransform::ModalTransform(ModalTransform&&) noexcept = default;
ModalTransform& ModalTransform::operator=(ModalTransform&&) noexcept = default;

int ModalTransform::modes() const { return impl_->modes; }
const Grid& ModalTransform::grid() const { return impl_->grid; }

void ModalTransform::forward(const Field2D& in, Modal& out) {
    const auto values = in.values();
    std::copy(values.begin(), values.end(), impl_->real);
    fftw_execute(impl_->fwd);
    const std::size_t count = static_cast<std::size_t>(impl_->modes) * impl_->grid.rows();
    out.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = {impl_->spectral[k][0], impl_->spectral[k][1]};
    }
}

void ModalTransform::inverse(const Modal& in, Field2D& out) {
    const std::size_t count = static_cast<std::size_t>(impl_->modes) * impl_->grid.rows();
    for (std::size_t k = 0; k < count; ++k) {
        impl_->spectral[k][0] = in[k].real();
        impl_->spectral[k][1] = in[k].imag();
    }
    fftw_execute(impl_->bwd);
    if (!out.matches(impl_->grid)) out = Field2D(impl_->grid);
    const double scale = 1.0 / impl_->grid.nx;
    auto values = out.values();
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = impl_->real[k] * scale;
}

double ModalTransform::symbol(int m) const {
    const double dx = impl_->grid.dx();
    const double s = std::sin(std::numbers::pi * m / impl_->grid.nx);
    return 4.0 * s * s / (dx * dx);
}

PoissonSolver::PoissonSolver(const Grid& grid) : grid_(grid), transform_(grid) {
    const int interior = grid.nz - 1;
    const double inv_dz2 = 1.0 / (grid.dz() * grid.dz());
    operators_.reserve(transform_.modes());
    for (int m = 0; m < transform_.modes(); ++m) {
        Tridiagonal op(interior);
        for (int r = 0; r < interior; ++r) {
            op.lower[r] = -inv_dz2;
            op.upper[r] = -inv_dz2;
            op.diag[r] = 2.0 * inv_dz2 + transform_.symbol(m);
        }
        operators_.push_back(std::move(op));
    }
}

void PoissonSolver::solve(const Field2D& zeta, Field2D& psi) {
    const int modes = transform_.modes();
    const int nz = grid_.nz;
    transform_.forward(zeta, modal_);
    column_.resize(nz - 1);
    for (int m = 0; m < modes; ++m) {
        for (int j = 1; j < nz; ++j) column_[j - 1] = modal_[static_cast<std::size_t>(j) * modes + m];
        operators_[m].solve(std::span(column_), scratch_);
        for (int j = 1; j < nz; ++j) modal_[static_cast<std::size_t>(j) * modes + m] = column_[j - 1];
        modal_[m] = 0.0;
        modal_[static_cast<std::size_t>(nz) * modes + m] = 0.0;
    }
    transform_.inverse(modal_, psi);
}

Field2D PoissonSolver::solve(const Field2D& zeta) {
    Field2D psi(grid_);
    solve(zeta, psi);
    return psi;
}

Field2D poisson_solve(const Field2D& zeta, const Grid& grid) {
    PoissonSolver solver(grid);
    return solver.solve(zeta);
}

Velocity velocity_from_psi(const Field2D& psi, const Grid& grid) {
    Velocity v{Field2D(grid), Field2D(grid)};
    const double dx = grid.dx();
    const double dz = grid.dz();
    const int nz = grid.nz;
    for (int j = 0; j <= nz; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            if (j == 0) {
                v.u(i, j) = (-3.0 * psi(i, 0) + 4.0 * psi(i, 1) - psi(i, 2)) / (2.0 * dz);
            } else if (j == nz) {
                v.u(i, j) = (3.0 * psi(i, nz) - 4.0 * psi(i, nz - 1) + psi(i, nz - 2)) / (2.0 * dz);
            } else {
                v.u(i, j) = (psi(i, j + 1) - psi(i, j - 1)) / (2.0 * dz);
            }
            v.w(i, j) = -(psi(grid.wrap(i + 1), j) - psi(grid.wrap(i - 1), j)) / (2.0 * dx);
        }
    }
    return v;
}

Field2D laplacian(const Field2D& f, const Grid& grid) {
    Field2D out(grid);
    const double idx2 = 1.0 / (grid.dx() * grid.dx());
    const double idz2 = 1.0 / (grid.dz() * grid.dz());
    for (int j = 1; j < grid.nz; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            out(i, j) = (f(grid.wrap(i + 1), j) - 2.0 * f(i, j) + f(grid.wrap(i - 1), j)) * idx2 +
                        (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * idz2;
        }
    }
    return out;
}

}  // namespace photobio
