#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace photobio {

/// Real tridiagonal matrix; row r is lower[r] x[r-1] + diag[r] x[r] + upper[r] x[r+1].
/// lower[0] and upper[n-1] are ignored.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n) {}
    std::size_t size() const { return diag.size(); }

    // Thomas algorithm; no pivoting, so the matrix must be diagonally dominant
    // or otherwise safe for elimination (all operators here are).
    template <class T>
    void solve(std::span<T> rhs, std::vector<double>& scratch) const {
        const std::size_t n = diag.size();
        scratch.resize(n);
        double beta = diag[0];
        rhs[0] /= beta;
        for (std::size_t r = 1; r < n; ++r) {
            scratch[r] = upper[r - 1] / beta;
            beta = diag[r] - lower[r] * scratch[r];
            rhs[r] = (rhs[r] - lower[r] * rhs[r - 1]) / beta;
        }
        for (std::size_t r = n - 1; r-- > 0;) rhs[r] -= scratch[r + 1] * rhs[r + 1];
    }
};

}  // namespace photobio
