#pragma once

#include <span>

#include "photobio/grid.hpp"

namespace photobio {

struct SimParams;

/// Inner map of the taxis curve: I * exp(beta * (I - 1)).
double chi(double intensity, double beta);

/// The sine superposition 0.8 sin(3 pi c / 2) - 0.1 sin(pi c / 2); the taxis
/// function is this evaluated at c = chi(I).
double sine_superposition(double c);

/// Nontrivial root of the sine superposition in (0.55, 0.665).
double critical_chi();

/// Shape parameter beta placing the taxis reversal at `critical_intensity`.
/// Throws CalibrationError when beta would leave [-10, 10].
double calibrate_beta(double critical_intensity);

/// Mean swimming response M(I): positive (upward) below the critical
/// intensity, negative above it.
class Photoresponse {
public:
    static Photoresponse from_critical_intensity(double critical_intensity);
    static Photoresponse from_beta(double beta);

    double beta() const noexcept { return beta_; }
    double critical_intensity() const noexcept { return critical_intensity_; }

    double operator()(double intensity) const noexcept;
    // dM/dI
    double slope(double intensity) const noexcept;

private:
    Photoresponse(double beta, double critical_intensity)
        : beta_(beta), critical_intensity_(critical_intensity) {}

    double beta_;
    double critical_intensity_;
};

/// Photoresponse as the parameters specify it (I_c or beta).
Photoresponse make_photoresponse(const SimParams& params);

/// Beer-Lambert attenuation down one column of node concentrations with
/// spacing dz (index 0 at the bottom): out[j] = I_t exp(-kappa int_{z_j}^1 n),
/// trapezoidal rule accumulated from the top. Rejects negative concentration.
void column_light(std::span<const double> n, double dz, double kappa, double I_t, std::span<double> out);

/// Column-wise light field over a 2D concentration field.
Field2D light_field(const Field2D& n, const Grid& grid, double kappa, double I_t);

}  // namespace photobio
