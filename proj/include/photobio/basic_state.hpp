#pragma once

#include <iosfwd>
#include <vector>

#include "photobio/photoresponse.hpp"

namespace photobio {

struct SimParams;

/// No-flow equilibrium: swimming balances diffusion in every column.
struct BasicState {
    std::vector<double> z;
    std::vector<double> n;          // unit trapezoidal mean
    std::vector<double> intensity;
    double sublayer_height = 0.0;   // z where intensity == I_c; NaN if undefined
    int iterations = 0;
};

struct BasicStateOptions {
    double relaxation = 0.5;
    double tolerance = 1e-12;
    int max_iterations = 200000;
    std::vector<double> initial_guess;  // empty: n = 1
};

/// Damped Picard iteration on (light given n) -> (n given light). The n-step
/// integrates the zero-flux balance face by face with the same centred face
/// flux the nonlinear stepper uses, so the result is an exact discrete
/// equilibrium of that scheme.
BasicState solve_basic_state(const Photoresponse& taxis, double Vc, double kappa, double I_t, int nz,
                             const BasicStateOptions& options = {});

BasicState solve_basic_state(const SimParams& params);

/// Height where a monotone intensity profile crosses `critical_intensity`,
/// by monotone cubic (PCHIP) inverse interpolation. Clamped to [0, 1].
double sublayer_height(const std::vector<double>& z, const std::vector<double>& intensity,
                       double critical_intensity);

void write_basic_state_csv(const BasicState& state, std::ostream& out);

}  // namespace photobio
