#include "photobio/rolls.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace photobio {

namespace {
constexpr double relative_threshold = 1e-3;
constexpr double secondary_floor = 0.6;

int sign_of(double v) { return v > 0 ? 1 : -1; }
}  // namespace

RollCount count_rolls(const Field2D& psi, const Grid& grid) {
    RollCount out;
    const double peak = max_abs(psi);
    if (peak == 0.0) return out;
    const double threshold = relative_threshold * peak;
    const int nx = grid.nx;

    std::vector<double> mid(nx);
    for (int i = 0; i < nx; ++i) {
        mid[i] = grid.nz % 2 == 0 ? psi(i, grid.nz / 2)
                                  : 0.5 * (psi(i, grid.nz / 2) + psi(i, grid.nz / 2 + 1));
    }

    std::vector<int> signs;
    for (double v : mid) {
        if (std::abs(v) > threshold) signs.push_back(sign_of(v));
    }
    if (signs.size() >= 2) {
        for (std::size_t k = 0; k < signs.size(); ++k) {
            if (signs[k] != signs[(k + 1) % signs.size()]) ++out.primary_rolls;
        }
    }

    // Flood-fill the counter-rotating regions, 4-connected and periodic in x.
    const int j0 = static_cast<int>(std::floor(secondary_floor * grid.nz)) + 1;
    auto candidate = [&](int i, int j) {
        return std::abs(psi(i, j)) > threshold && std::abs(mid[i]) > threshold &&
               sign_of(psi(i, j)) != sign_of(mid[i]);
    };
    std::vector<char> seen(grid.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int j = j0; j <= grid.nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t id = static_cast<std::size_t>(j) * nx + i;
            if (seen[id] || !candidate(i, j)) continue;
            int lo = j, hi = j;
            seen[id] = 1;
            stack.assign(1, {i, j});
            while (!stack.empty()) {
                auto [ci, cj] = stack.back();
                stack.pop_back();
                lo = std::min(lo, cj);
                hi = std::max(hi, cj);
                const std::pair<int, int> next[] = {
                    {grid.wrap(ci + 1), cj}, {grid.wrap(ci - 1), cj}, {ci, cj + 1}, {ci, cj - 1}};
                for (auto [ni, nj] : next) {
                    if (nj < j0 || nj > grid.nz) continue;
                    const std::size_t nid = static_cast<std::size_t>(nj) * nx + ni;
                    if (seen[nid] || !candidate(ni, nj)) continue;
                    seen[nid] = 1;
                    stack.emplace_back(ni, nj);
                }
            }
            ++out.secondary_cells;
            out.secondary_height = std::max(out.secondary_height, (hi - lo + 1) * grid.dz());
        }
    }
    return out;
}

}  // namespace photobio
