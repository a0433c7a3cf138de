#include "photobio/basic_state.hpp"

#include <cmath>
// boost 1.74 pchip calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "photobio/error.hpp"
#include "photobio/params.hpp"

namespace photobio {

namespace {

double trapezoid_mean(const std::vector<double>& v, double dz) {
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j) s += v[j];
    return s * dz;
}

}  // namespace

BasicState solve_basic_state(const Photoresponse& taxis, double Vc, double kappa, double I_t, int nz,
                             const BasicStateOptions& options) {
    if (nz < 2) throw ConfigError("basic state: nz must be >= 2");
    const double dz = 1.0 / nz;
    if (dz * Vc * 0.9 >= 2.0) {
        throw ConfigError("basic state: cell Peclet number dz*Vc*0.9 = " + std::to_string(dz * Vc * 0.9) +
                          " must be < 2; refine Nz");
    }

    const std::size_t nodes = static_cast<std::size_t>(nz) + 1;
    BasicState state;
    state.z.resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) state.z[j] = static_cast<double>(j) * dz;

    std::vector<double> n = options.initial_guess.empty() ? std::vector<double>(nodes, 1.0)
                                                          : options.initial_guess;
    if (n.size() != nodes) throw ConfigError("basic state: initial guess has wrong length");
    const double mean0 = trapezoid_mean(n, dz);
    for (double& v : n) v /= mean0;

    std::vector<double> light(nodes), next(nodes), taxis_at(nodes);
    double update = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        column_light(n, dz, kappa, I_t, light);
        for (std::size_t j = 0; j < nodes; ++j) taxis_at[j] = taxis(light[j]);

        // Zero face flux: Vc M_f (n_j + n_{j+1})/2 = (n_{j+1} - n_j)/dz.
        next[0] = 1.0;
        for (std::size_t j = 0; j + 1 < nodes; ++j) {
            const double p = dz * Vc * 0.5 * (taxis_at[j] + taxis_at[j + 1]);
            next[j + 1] = next[j] * (2.0 + p) / (2.0 - p);
        }
        const double mean = trapezoid_mean(next, dz);
        update = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) {
            next[j] /= mean;
            update = std::max(update, std::abs(next[j] - n[j]));
        }
        if (update < options.tolerance) {
            n = next;
            break;
        }
        for (std::size_t j = 0; j < nodes; ++j) {
            n[j] = (1.0 - options.relaxation) * n[j] + options.relaxation * next[j];
        }
    }
    if (!(update < options.tolerance)) {
        throw ConvergenceError("basic state: Picard iteration did not converge in " +
                               std::to_string(options.max_iterations) +
                               " iterations; last update " + std::to_string(update));
    }

    column_light(n, dz, kappa, I_t, light);
    state.n = std::move(n);
    state.intensity = light;
    state.iterations = it + 1;
    state.sublayer_height = sublayer_height(state.z, state.intensity, taxis.critical_intensity());
    return state;
}

BasicState solve_basic_state(const SimParams& params) {
    return solve_basic_state(make_photoresponse(params), params.Vc, params.kappa,
                             params.I_t, params.Nz);
}

double sublayer_height(const std::vector<double>& z, const std::vector<double>& intensity,
                       double critical_intensity) {
    for (std::size_t j = 1; j < intensity.size(); ++j) {
        if (!(intensity[j] > intensity[j - 1])) return std::numeric_limits<double>::quiet_NaN();
    }
    if (critical_intensity <= intensity.front()) return 0.0;
    if (critical_intensity >= intensity.back()) return 1.0;
    auto x = intensity;
    auto y = z;
    boost::math::interpolators::pchip<std::vector<double>> inverse(std::move(x), std::move(y));
    return inverse(critical_intensity);
}

void write_basic_state_csv(const BasicState& state, std::ostream& out) {
    out << "z,n_s,I_s\n" << std::setprecision(17);
    for (std::size_t j = 0; j < state.z.size(); ++j) {
        out << state.z[j] << ',' << state.n[j] << ',' << state.intensity[j] << '\n';
    }
}

}  // namespace photobio
