#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "photobio/basic_state.hpp"
#include "photobio/params.hpp"
#include "photobio/photoresponse.hpp"

namespace photobio {

/// How x-derivatives act on a normal mode exp(ikx). Continuous symbols give
/// the differential problem; discrete ones reproduce the nonlinear stepper's
/// centred x-stencils on a grid of spacing dx.
struct XSymbols {
    double first = 0.0;   // d/dx -> i * first
    double second = 0.0;  // -d2/dx2 -> second

    static XSymbols continuous(double k) { return {k, k * k}; }
    static XSymbols discrete(double k, double dx);
};

/// Generalized eigenproblem  sigma B x = A x  for x = (Psi_1..Psi_{nz-1},
/// Phi~_0..Phi~_nz), where the perturbation is psi' = Re[Psi e^{ikx}] and
/// n' = Re[i Phi~ e^{ikx}] (the factor i makes both matrices real).
struct LinearOperator {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

struct Eigenmode {
    std::complex<double> sigma;
    // Complex amplitudes on the nz + 1 nodes: field = Re[amp(z) e^{ikx}].
    std::vector<std::complex<double>> psi, zeta, n;
};

/// Linearization of the vorticity / cell-conservation system about a basic
/// state. The z-discretization mirrors the nonlinear stepper term by term.
class StabilityProblem {
public:
    StabilityProblem(BasicState basic, const Photoresponse& taxis, double Sc, double Vc, double kappa);

    static std::shared_ptr<const StabilityProblem> from_params(const SimParams& params);

    const BasicState& basic() const { return basic_; }
    int nz() const { return nz_; }

    LinearOperator build(double R, const XSymbols& symbols) const;

    /// Rightmost eigenvalue.
    std::complex<double> growth_rate(double k, double R) const;
    std::complex<double> growth_rate(double R, const XSymbols& symbols) const;

    Eigenmode leading_mode(double R, const XSymbols& symbols) const;

    /// R where the rightmost eigenvalue crosses Re sigma = 0, to relative
    /// tolerance ~1e-12. `guess` seeds the bracket search.
    double neutral_rayleigh(double k, std::optional<double> guess = {}) const;

private:
    Eigen::MatrixXd reduced(double R, const XSymbols& symbols) const;

    BasicState basic_;
    int nz_;
    double Sc_, Vc_, kappa_;
    std::vector<double> taxis_, taxis_slope_;
    Eigen::MatrixXd swim_;  // R- and k-independent swimming + z-diffusion block
};

struct NeutralCurveResult {
    std::vector<double> k;
    std::vector<double> R;
    double k_c = 0.0;
    double R_c = 0.0;
    double lambda_c = 0.0;
    std::shared_ptr<const StabilityProblem> problem;

    std::complex<double> sigma(double Rayleigh, double wavenumber) const {
        return problem->growth_rate(wavenumber, Rayleigh);
    }
    CriticalSummary summary() const { return {k_c, R_c, lambda_c}; }
};

/// Neutral curve on a log-spaced k grid, then Brent (golden-section with
/// parabolic steps) refinement around the sampled minimum. Throws
/// ConvergenceError when the minimum sits on a k-range endpoint.
NeutralCurveResult critical_point(std::shared_ptr<const StabilityProblem> problem, double k_min,
                                  double k_max, int samples);

NeutralCurveResult critical_point(const SimParams& params);

/// Refine only: minimize R_neutral on [k_lo, k_hi] without the sampling pass.
NeutralCurveResult refine_critical_point(std::shared_ptr<const StabilityProblem> problem, double k_lo,
                                         double k_hi, std::optional<double> guess = {});

void write_neutral_csv(const NeutralCurveResult& result, std::ostream& out);

}  // namespace photobio
