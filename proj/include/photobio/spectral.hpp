#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "photobio/grid.hpp"
#include "photobio/tridiagonal.hpp"

namespace photobio {

using Modal = std::vector<std::complex<double>>;

/// Real-to-complex DFT along x for every z-row of a Field2D. Modal data is
/// laid out as [row * modes() + m], m = 0 .. nx/2.
class ModalTransform {
public:
    explicit ModalTransform(const Grid& grid);
    ~ModalTransform();
    ModalTransform(ModalTransform&&) noexcept;
    ModalTransform& operator=(ModalTransform&&) noexcept;
    ModalTransform(const ModalTransform&) = delete;
    ModalTransform& operator=(const ModalTransform&) = delete;

    int modes() const;
    const Grid& grid() const;

    void forward(const Field2D& in, Modal& out);
    // Includes the 1/nx normalization, so inverse(forward(f)) == f.
    void inverse(const Modal& in, Field2D& out);

    /// Eigenvalue of the periodic second difference -d2/dx2 for mode m.
    double symbol(int m) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// 5-point Poisson solve -lap(psi) = zeta with psi = 0 on z = 0 and z = 1 and
/// periodic x: DFT in x, one Thomas solve in z per mode.
class PoissonSolver {
public:
    explicit PoissonSolver(const Grid& grid);

    // Wall rows of zeta are ignored; wall rows of psi are set to zero.
    void solve(const Field2D& zeta, Field2D& psi);
    Field2D solve(const Field2D& zeta);

    // Per-mode interior operator (rows j = 1 .. nz-1), exposed for the stepper.
    const Tridiagonal& mode_operator(int m) const { return operators_[m]; }
    ModalTransform& transform() { return transform_; }

private:
    Grid grid_;
    ModalTransform transform_;
    std::vector<Tridiagonal> operators_;
    Modal modal_;
    std::vector<std::complex<double>> column_;
    std::vector<double> scratch_;
};

Field2D poisson_solve(const Field2D& zeta, const Grid& grid);

struct Velocity {
    Field2D u;  // d psi / dz
    Field2D w;  // -d psi / dx
};

/// Node velocities by second-order central differences, one-sided
/// second-order differences for u on the two walls.
Velocity velocity_from_psi(const Field2D& psi, const Grid& grid);

/// Discrete 5-point Laplacian at interior rows (wall rows left zero).
Field2D laplacian(const Field2D& f, const Grid& grid);

}  // namespace photobio
