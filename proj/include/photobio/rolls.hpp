#pragma once

#include "photobio/grid.hpp"

namespace photobio {

struct RollCount {
    int primary_rolls = 0;      // sign changes of psi along z = 1/2, periodic wrap counted
    int secondary_cells = 0;    // opposite-signed regions above z = 0.6
    double secondary_height = 0.0;  // largest vertical extent among those regions
};

/// Roll census of a stream function. Values below 1e-3 max|psi| are treated
/// as zero in both counts.
RollCount count_rolls(const Field2D& psi, const Grid& grid);

}  // namespace photobio
