#include "photobio/grid.hpp"

#include <cmath>
#include <string>

#include "photobio/error.hpp"

namespace photobio {

Grid::Grid(int nx_, int nz_, double width_) : nx(nx_), nz(nz_), width(width_) {
    if (nx < 8 || nz < 8) {
        throw ConfigError("grid: need nx >= 8 and nz >= 8, got " + std::to_string(nx) + " x " +
                          std::to_string(nz));
    }
    if (!(width > 0) || !std::isfinite(width)) throw ConfigError("grid: width must be positive");
}

double max_abs(const Field2D& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double integrate(const Field2D& f, const Grid& grid) {
    double total = 0.0;
    for (int j = 0; j < grid.rows(); ++j) {
        double s = 0.0;
        for (double v : f.row(j)) s += v;
        total += (j == 0 || j == grid.nz ? 0.5 : 1.0) * s;
    }
    return total * grid.dx() * grid.dz();
}

}  // namespace photobio
