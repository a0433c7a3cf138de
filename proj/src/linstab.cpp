#include "photobio/linstab.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "photobio/error.hpp"
#include "photobio/parallel.hpp"

namespace photobio {

namespace {
constexpr double max_rayleigh = 1e9;
}

XSymbols XSymbols::discrete(double k, double dx) {
    const double s = std::sin(0.5 * k * dx);
    return {std::sin(k * dx) / dx, 4.0 * s * s / (dx * dx)};
}

StabilityProblem::StabilityProblem(BasicState basic, const Photoresponse& taxis, double Sc, double Vc,
                                   double kappa)
    : basic_(std::move(basic)),
      nz_(static_cast<int>(basic_.n.size()) - 1),
      Sc_(Sc),
      Vc_(Vc),
      kappa_(kappa) {
    if (nz_ < 4) throw ConfigError("linstab: basic state too coarse");
    const int nodes = nz_ + 1;
    const double dz = 1.0 / nz_;
    const auto& n = basic_.n;
    const auto& light = basic_.intensity;

    taxis_.resize(nodes);
    taxis_slope_.resize(nodes);
    for (int j = 0; j < nodes; ++j) {
        taxis_[j] = taxis(light[j]);
        taxis_slope_[j] = taxis.slope(light[j]);
    }

    // Perturbed light: I~_j = -kappa I_j sum_{m >= j} dz (Phi_m + Phi_{m+1}) / 2.
    Eigen::MatrixXd shade = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int j = nz_ - 1; j >= 0; --j) {
        shade.row(j) = shade.row(j + 1);
        shade(j, j) += 0.5 * dz;
        shade(j, j + 1) += 0.5 * dz;
    }
    for (int j = 0; j < nodes; ++j) shade.row(j) *= -kappa * light[j];

    // Face flux F_{j+1/2} = swimming - diffusion, as rows over Phi.
    Eigen::MatrixXd flux = Eigen::MatrixXd::Zero(nz_, nodes);
    for (int f = 0; f < nz_; ++f) {
        const double m_face = 0.5 * (taxis_[f] + taxis_[f + 1]);
        const double n_face = 0.5 * (n[f] + n[f + 1]);
        flux(f, f) += 0.5 * Vc * m_face;
        flux(f, f + 1) += 0.5 * Vc * m_face;
        flux.row(f) += 0.5 * Vc * n_face *
                       (taxis_slope_[f] * shade.row(f) + taxis_slope_[f + 1] * shade.row(f + 1));
        flux(f, f + 1) -= 1.0 / dz;
        flux(f, f) += 1.0 / dz;
    }
    swim_ = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int j = 0; j < nodes; ++j) {
        const double h = (j == 0 || j == nz_) ? 0.5 * dz : dz;
        if (j < nz_) swim_.row(j) -= flux.row(j) / h;
        if (j > 0) swim_.row(j) += flux.row(j - 1) / h;
    }
}

std::shared_ptr<const StabilityProblem> StabilityProblem::from_params(const SimParams& params) {
    const int nz = params.linstab_nz > 0 ? params.linstab_nz : params.Nz;
    const auto taxis = make_photoresponse(params);
    auto basic = solve_basic_state(taxis, params.Vc, params.kappa, params.I_t, nz);
    return std::make_shared<const StabilityProblem>(std::move(basic), taxis, params.Sc, params.Vc,
                                                    params.kappa);
}

LinearOperator StabilityProblem::build(double R, const XSymbols& sym) const {
    const int nz = nz_;
    const int m = nz - 1;
    const int q = nz + 1;
    const double dz = 1.0 / nz;
    const double idz2 = 1.0 / (dz * dz);
    const auto& n = basic_.n;

    // Vorticity rows over interior Psi: Z_0 is Thom's wall value, Z_nz = 0.
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(q, m);
    for (int j = 1; j < nz; ++j) {
        const int c = j - 1;
        Z(j, c) = 2.0 * idz2 + sym.second;
        if (c > 0) Z(j, c - 1) = -idz2;
        if (c + 1 < m) Z(j, c + 1) = -idz2;
    }
    Z(0, 0) = -2.0 * idz2;

    LinearOperator op{Eigen::MatrixXd::Zero(m + q, m + q), Eigen::MatrixXd::Zero(m + q, m + q)};
    for (int j = 1; j < nz; ++j) {
        const int r = j - 1;
        op.B.row(r).head(m) = Z.row(j);
        op.A.row(r).head(m) =
            Sc_ * ((Z.row(j + 1) - 2.0 * Z.row(j) + Z.row(j - 1)) * idz2 - sym.second * Z.row(j));
        // -Sc R dn'/dx with n' = i Phi~ e^{ikx}.
        op.A(r, m + j) = Sc_ * R * sym.first;
    }

    op.B.bottomRightCorner(q, q).setIdentity();
    op.A.bottomRightCorner(q, q) = swim_;
    op.A.bottomRightCorner(q, q).diagonal().array() -= sym.second;

    // Advection of the basic stratification by the corner-averaged volume fluxes.
    auto half = [&](int f, Eigen::Ref<Eigen::RowVectorXd> row, double scale) {
        // Psi at z_{f+1/2}, zero on the walls.
        if (f >= 1 && f <= nz - 1) row(f - 1) += 0.5 * scale;
        if (f + 1 >= 1 && f + 1 <= nz - 1) row(f) += 0.5 * scale;
    };
    for (int j = 0; j <= nz; ++j) {
        const double h = (j == 0 || j == nz) ? 0.5 * dz : dz;
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
        if (j < nz) half(j, row, n[j] - 0.5 * (n[j] + n[j + 1]));
        if (j > 0) half(j - 1, row, -(n[j] - 0.5 * (n[j - 1] + n[j])));
        op.A.row(m + j).head(m) = -sym.first / h * row;
    }
    return op;
}

Eigen::MatrixXd StabilityProblem::reduced(double R, const XSymbols& sym) const {
    LinearOperator op = build(R, sym);
    const int m = nz_ - 1;
    Eigen::MatrixXd C = op.A;
    C.topRows(m) = op.B.topLeftCorner(m, m).partialPivLu().solve(op.A.topRows(m));
    return C;
}

std::complex<double> StabilityProblem::growth_rate(double k, double R) const {
    return growth_rate(R, XSymbols::continuous(k));
}

std::complex<double> StabilityProblem::growth_rate(double R, const XSymbols& sym) const {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(reduced(R, sym), false);
    if (solver.info() != Eigen::Success) throw SolverError("linstab: eigenvalue iteration failed");
    const auto& ev = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
        if (ev[i].real() > ev[best].real()) best = i;
    }
    return ev[best];
}

Eigenmode StabilityProblem::leading_mode(double R, const XSymbols& sym) const {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(reduced(R, sym), true);
    if (solver.info() != Eigen::Success) throw SolverError("linstab: eigenvalue iteration failed");
    const auto& ev = solver.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
        if (ev[i].real() > ev[best].real()) best = i;
    }
    Eigen::VectorXcd v = solver.eigenvectors().col(best);

    const int nz = nz_;
    const int m = nz - 1;
    const double idz2 = static_cast<double>(nz) * nz;
    Eigenmode mode;
    mode.sigma = ev[best];
    mode.psi.assign(nz + 1, 0.0);
    mode.zeta.assign(nz + 1, 0.0);
    mode.n.assign(nz + 1, 0.0);
    for (int j = 1; j < nz; ++j) mode.psi[j] = v[j - 1];

    // Scale so that max |psi| = 1 and psi is real at its peak.
    int peak = 1;
    for (int j = 1; j < nz; ++j) {
        if (std::abs(mode.psi[j]) > std::abs(mode.psi[peak])) peak = j;
    }
    const std::complex<double> scale = std::abs(mode.psi[peak]) > 0 ? 1.0 / mode.psi[peak] : 1.0;
    for (int j = 0; j <= nz; ++j) {
        mode.psi[j] *= scale;
        mode.n[j] = std::complex<double>(0.0, 1.0) * v[m + j] * scale;
    }
    for (int j = 1; j < nz; ++j) {
        mode.zeta[j] = (2.0 * mode.psi[j] - mode.psi[j - 1] - mode.psi[j + 1]) * idz2 +
                       sym.second * mode.psi[j];
    }
    mode.zeta[0] = -2.0 * mode.psi[1] * idz2;
    return mode;
}

double StabilityProblem::neutral_rayleigh(double k, std::optional<double> guess) const {
    const auto sym = XSymbols::continuous(k);
    auto g = [&](double R) { return growth_rate(R, sym).real(); };

    const double g0 = g(0.0);
    if (g0 >= 0) {
        throw ConvergenceError("linstab: basic state already unstable at R = 0 (k = " +
                               std::to_string(k) + ")");
    }
    double lo = 0.0, g_lo = g0;
    double hi = guess && *guess > 0 ? *guess : 100.0;
    double g_hi = g(hi);
    if (g_hi < 0) {
        while (g_hi < 0) {
            lo = hi;
            g_lo = g_hi;
            hi *= 1.5;
            if (hi > max_rayleigh) {
                throw ConvergenceError("linstab: no neutral crossing for k = " + std::to_string(k) +
                                       " in R in [0, 1e9]");
            }
            g_hi = g(hi);
        }
    } else {
        double probe = hi / 1.5;
        double g_probe = g(probe);
        while (g_probe >= 0 && probe > 1e-6) {
            hi = probe;
            g_hi = g_probe;
            probe /= 1.5;
            g_probe = g(probe);
        }
        if (g_probe < 0) {
            lo = probe;
            g_lo = g_probe;
        }
    }

    boost::uintmax_t iterations = 100;
    auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi,
                                                    boost::math::tools::eps_tolerance<double>(42),
                                                    iterations);
    return 0.5 * (a + b);
}

NeutralCurveResult refine_critical_point(std::shared_ptr<const StabilityProblem> problem, double k_lo,
                                         double k_hi, std::optional<double> guess) {
    NeutralCurveResult result;
    double last = guess.value_or(0.0);
    auto f = [&](double k) {
        last = problem->neutral_rayleigh(k, last > 0 ? std::optional<double>(last) : std::nullopt);
        return last;
    };
    boost::uintmax_t iterations = 80;
    auto [k_c, R_c] = boost::math::tools::brent_find_minima(f, k_lo, k_hi, 30, iterations);
    result.k_c = k_c;
    result.R_c = R_c;
    result.lambda_c = 2.0 * std::numbers::pi / k_c;
    result.problem = std::move(problem);
    return result;
}

NeutralCurveResult critical_point(std::shared_ptr<const StabilityProblem> problem, double k_min,
                                  double k_max, int samples) {
    if (!(k_min > 0 && k_max > k_min && samples >= 3)) {
        throw ConfigError("linstab: need 0 < k_min < k_max and >= 3 samples");
    }
    std::vector<double> ks(samples), Rs(samples);
    for (int s = 0; s < samples; ++s) {
        ks[s] = k_min * std::pow(k_max / k_min, static_cast<double>(s) / (samples - 1));
    }
    parallel_chunks(samples, [&](int begin, int end) {
        std::optional<double> guess;
        for (int s = begin; s < end; ++s) {
            Rs[s] = problem->neutral_rayleigh(ks[s], guess);
            guess = Rs[s];
        }
    });

    int best = 0;
    for (int s = 1; s < samples; ++s) {
        if (Rs[s] < Rs[best]) best = s;
    }
    if (best == 0 || best == samples - 1) {
        throw ConvergenceError("linstab: neutral-curve minimum at the k-range endpoint k = " +
                               std::to_string(ks[best]) + "; widen [k_min, k_max]");
    }

    auto result = refine_critical_point(problem, ks[best - 1], ks[best + 1], Rs[best]);
    if (result.R_c > Rs[best]) {  // the sample is already the better minimizer
        result.R_c = Rs[best];
        result.k_c = ks[best];
        result.lambda_c = 2.0 * std::numbers::pi / ks[best];
    }
    result.k = std::move(ks);
    result.R = std::move(Rs);
    return result;
}

NeutralCurveResult critical_point(const SimParams& params) {
    return critical_point(StabilityProblem::from_params(params), params.k_min, params.k_max,
                          params.k_samples);
}

void write_neutral_csv(const NeutralCurveResult& result, std::ostream& out) {
    out << "k,R_neutral\n" << std::setprecision(17);
    for (std::size_t s = 0; s < result.k.size(); ++s) out << result.k[s] << ',' << result.R[s] << '\n';
}

}  // namespace photobio
