#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace photobio {

/// Uniform node grid on [0, width) x [0, 1]: x periodic with nx nodes (the
/// node at x = width is the node at x = 0), z with nz cells and nz + 1 nodes
/// including both walls.
struct Grid {
    int nx = 0;
    int nz = 0;
    double width = 0.0;

    Grid() = default;
    Grid(int nx, int nz, double width);

    double dx() const { return width / nx; }
    double dz() const { return 1.0 / nz; }
    int rows() const { return nz + 1; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * rows(); }
    double x(int i) const { return i * dx(); }
    double z(int j) const { return j * dz(); }
    int wrap(int i) const { return ((i % nx) + nx) % nx; }

    bool operator==(const Grid&) const = default;
};

/// Node values stored row-major by z-level: value(i, j) lives at j * nx + i.
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const Grid& grid, double value = 0.0)
        : nx_(grid.nx), rows_(grid.rows()), values_(grid.size(), value) {}

    double& operator()(int i, int j) { return values_[static_cast<std::size_t>(j) * nx_ + i]; }
    double operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * nx_ + i]; }

    std::span<double> row(int j) { return {values_.data() + static_cast<std::size_t>(j) * nx_, static_cast<std::size_t>(nx_)}; }
    std::span<const double> row(int j) const {
        return {values_.data() + static_cast<std::size_t>(j) * nx_, static_cast<std::size_t>(nx_)};
    }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    int nx() const { return nx_; }
    int rows() const { return rows_; }
    bool matches(const Grid& grid) const { return nx_ == grid.nx && rows_ == grid.rows(); }

    bool operator==(const Field2D&) const = default;

private:
    int nx_ = 0;
    int rows_ = 0;
    std::vector<double> values_;
};

double max_abs(const Field2D& f);

// Trapezoidal-in-z integral over the periodic domain.
double integrate(const Field2D& f, const Grid& grid);

}  // namespace photobio
