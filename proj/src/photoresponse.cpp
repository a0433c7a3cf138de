#include "photobio/photoresponse.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "photobio/error.hpp"
#include "photobio/params.hpp"

namespace photobio {

namespace {
constexpr double pi = std::numbers::pi;
constexpr double beta_bracket = 10.0;

[[noreturn]] void negative_concentration(double value) {
    throw SolverError("light field: negative concentration " + std::to_string(value) +
                      " (upstream solver corruption)");
}
}  // namespace

double chi(double intensity, double beta) { return intensity * std::exp(beta * (intensity - 1.0)); }

double sine_superposition(double c) {
    return 0.8 * std::sin(1.5 * pi * c) - 0.1 * std::sin(0.5 * pi * c);
}

double critical_chi() {
    static const double root = [] {
        constexpr double lo = 0.55;
        constexpr double hi = 0.665;
        if (!(sine_superposition(lo) > 0 && sine_superposition(hi) < 0)) {
            throw CalibrationError("critical_chi: no sign change on [0.55, 0.665]");
        }
        auto [a, b] = boost::math::tools::bisect(
            sine_superposition, lo, hi, [](double l, double r) { return r - l <= 1e-15; });
        return 0.5 * (a + b);
    }();
    return root;
}

double calibrate_beta(double critical_intensity) {
    if (!(critical_intensity > 0 && critical_intensity < 1)) {
        throw CalibrationError("calibrate_beta: I_c = " + std::to_string(critical_intensity) +
                               " outside (0, 1)");
    }
    // chi(I_c; beta) = chi* inverts in closed form.
    const double beta = std::log(critical_chi() / critical_intensity) / (critical_intensity - 1.0);
    if (std::abs(beta) > beta_bracket) {
        throw CalibrationError("calibrate_beta: I_c = " + std::to_string(critical_intensity) +
                               " needs beta = " + std::to_string(beta) +
                               ", outside the search bracket [-10, 10]");
    }
    return beta;
}

Photoresponse Photoresponse::from_critical_intensity(double critical_intensity) {
    return {calibrate_beta(critical_intensity), critical_intensity};
}

Photoresponse Photoresponse::from_beta(double beta) {
    if (!(std::abs(beta) <= beta_bracket)) {
        throw CalibrationError("photoresponse: beta = " + std::to_string(beta) +
                               " outside [-10, 10]");
    }
    // chi(0) = 0 < chi* < 1 = chi(1), so the reversal intensity is bracketed by (0, 1).
    const double target = critical_chi();
    auto [a, b] = boost::math::tools::bisect([&](double I) { return chi(I, beta) - target; }, 0.0,
                                             1.0, [](double l, double r) { return r - l <= 1e-15; });
    return {beta, 0.5 * (a + b)};
}

double Photoresponse::operator()(double intensity) const noexcept {
    return sine_superposition(chi(intensity, beta_));
}

double Photoresponse::slope(double intensity) const noexcept {
    const double c = chi(intensity, beta_);
    const double dchi = std::exp(beta_ * (intensity - 1.0)) * (1.0 + beta_ * intensity);
    const double dm = 0.8 * 1.5 * pi * std::cos(1.5 * pi * c) - 0.1 * 0.5 * pi * std::cos(0.5 * pi * c);
    return dm * dchi;
}

Photoresponse make_photoresponse(const SimParams& params) {
    return params.photo_input == PhotoInput::critical_intensity
               ? Photoresponse::from_critical_intensity(params.I_c)
               : Photoresponse::from_beta(params.beta);
}

void column_light(std::span<const double> n, double dz, double kappa, double I_t, std::span<double> out) {
    const std::size_t top = n.size() - 1;
    if (n[top] < 0) negative_concentration(n[top]);
    double depth = 0.0;
    out[top] = I_t;
    for (std::size_t j = top; j-- > 0;) {
        if (n[j] < 0) negative_concentration(n[j]);
        depth += 0.5 * dz * (n[j] + n[j + 1]);
        out[j] = I_t * std::exp(-kappa * depth);
    }
}

Field2D light_field(const Field2D& n, const Grid& grid, double kappa, double I_t) {
    Field2D light(grid);
    const double dz = grid.dz();
    const int nx = grid.nx;
    std::vector<double> depth(nx, 0.0);
    for (int i = 0; i < nx; ++i) {
        if (n(i, grid.nz) < 0) negative_concentration(n(i, grid.nz));
        light(i, grid.nz) = I_t;
    }
    for (int j = grid.nz - 1; j >= 0; --j) {
        const auto below = n.row(j);
        const auto above = n.row(j + 1);
        auto out = light.row(j);
        for (int i = 0; i < nx; ++i) {
            if (below[i] < 0) negative_concentration(below[i]);
            depth[i] += 0.5 * dz * (below[i] + above[i]);
            out[i] = I_t * std::exp(-kappa * depth[i]);
        }
    }
    return light;
}

}  // namespace photobio
