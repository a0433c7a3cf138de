#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "photobio/basic_state.hpp"
#include "photobio/error.hpp"
#include "photobio/linstab.hpp"
#include "photobio/params.hpp"

using namespace photobio;

namespace {

SimParams base_case(int nz = 32) {
    auto p = load_config("Vc = 10\nkappa = 0.5\nI_c = 0.66\nR_mult = 1.5\n");
    p.Nz = nz;
    return p;
}

// psi = z^2 (1 - z)^3: psi = psi_z = 0 at the bottom, psi = psi_zz = 0 at the top.
double psi_test(double z) { return z * z - 3 * std::pow(z, 3) + 3 * std::pow(z, 4) - std::pow(z, 5); }
double psi_zz(double z) { return 2 - 18 * z + 36 * z * z - 20 * std::pow(z, 3); }
double psi_zzzz(double z) { return 72 - 120 * z; }

}  // namespace

TEST(XSymbols, DiscreteApproachesContinuous) {
    const double k = 2.1;
    const auto c = XSymbols::continuous(k);
    const auto d = XSymbols::discrete(k, 1e-4);
    EXPECT_NEAR(d.first, c.first, 1e-6);
    EXPECT_NEAR(d.second, c.second, 1e-6);
    EXPECT_DOUBLE_EQ(c.second, k * k);
}

TEST(Linstab, VorticityRowsMatchBiharmonic) {
    const double k = 2.0;
    const double Sc = 20.0;
    double prev = 0.0;
    for (int nz : {32, 64}) {
        const auto p = base_case(nz);
        const auto problem = StabilityProblem::from_params(p);
        const auto op = problem->build(0.0, XSymbols::continuous(k));
        Eigen::VectorXd x = Eigen::VectorXd::Zero(op.A.cols());
        for (int j = 1; j < nz; ++j) x[j - 1] = psi_test(j / static_cast<double>(nz));
        const Eigen::VectorXd bx = op.B * x, ax = op.A * x;
        double err_b = 0.0, err_a = 0.0;
        // Rows next to a wall see the imposed wall vorticity directly; check the rest.
        for (int j = 2; j < nz - 1; ++j) {
            const double z = j / static_cast<double>(nz);
            const double zeta = -psi_zz(z) + k * k * psi_test(z);
            const double bih = -psi_zzzz(z) + 2 * k * k * psi_zz(z) - std::pow(k, 4) * psi_test(z);
            err_b = std::max(err_b, std::abs(bx[j - 1] - zeta));
            err_a = std::max(err_a, std::abs(ax[j - 1] - Sc * bih));
        }
        EXPECT_LT(err_b, 1e-12 + 10.0 / (nz * nz));
        if (prev > 0) EXPECT_GT(prev / err_a, 3.0);
        prev = err_a;
    }
}

TEST(Linstab, DecaysWithoutBuoyancy) {
    const auto problem = StabilityProblem::from_params(base_case());
    for (double k : {0.5, 2.0, 3.0, 8.0}) EXPECT_LT(problem->growth_rate(k, 0.0).real(), 0.0) << k;
}

TEST(Linstab, UnstratifiedHasNoOnset) {
    const auto M = Photoresponse::from_critical_intensity(0.66);
    auto basic = solve_basic_state(M, 0.0, 0.0, 0.8, 16);
    const StabilityProblem problem(std::move(basic), M, 20.0, 0.0, 0.0);
    EXPECT_NEAR(problem.growth_rate(2.0, 0.0).real(), problem.growth_rate(2.0, 1e6).real(), 1e-8);
    EXPECT_THROW(problem.neutral_rayleigh(2.0), ConvergenceError);
}

TEST(Linstab, GrowthIncreasesWithRayleigh) {
    const auto problem = StabilityProblem::from_params(base_case());
    const double k = 2.0;
    const double Rn = problem->neutral_rayleigh(k);
    double prev = -1e300;
    for (double f : {0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2}) {
        const double s = problem->growth_rate(k, f * Rn).real();
        EXPECT_GT(s, prev);
        prev = s;
    }
    EXPECT_NEAR(problem->growth_rate(k, Rn).real(), 0.0, 1e-8);
}

TEST(Linstab, NeutralIndependentOfGuess) {
    const auto problem = StabilityProblem::from_params(base_case());
    const double a = problem->neutral_rayleigh(3.0);
    EXPECT_NEAR(problem->neutral_rayleigh(3.0, 10.0), a, 1e-9 * a);
    EXPECT_NEAR(problem->neutral_rayleigh(3.0, 1e5), a, 1e-9 * a);
}

TEST(Linstab, CriticalPointIsMinimum) {
    const auto p = base_case();
    const auto r = critical_point(StabilityProblem::from_params(p), 0.5, 20.0, 24);
    EXPECT_GT(r.k_c, 0.5);
    EXPECT_LT(r.k_c, 20.0);
    EXPECT_GT(r.R_c, 0.0);
    EXPECT_DOUBLE_EQ(r.lambda_c, 2 * std::numbers::pi / r.k_c);
    for (double d : {-0.2, 0.2}) EXPECT_GT(r.problem->neutral_rayleigh(r.k_c + d), r.R_c);
    for (double R : r.R) EXPECT_GE(R, r.R_c * (1 - 1e-9));
    EXPECT_EQ(r.k.size(), 24u);
}

TEST(Linstab, EndpointMinimumRejected) {
    const auto problem = StabilityProblem::from_params(base_case());
    EXPECT_THROW(critical_point(problem, 5.0, 10.0, 5), ConvergenceError);
    EXPECT_THROW(critical_point(problem, 2.0, 1.0, 5), ConfigError);
}

TEST(Linstab, LeadingModeShape) {
    const auto p = base_case();
    const auto problem = StabilityProblem::from_params(p);
    const auto mode = problem->leading_mode(400.0, XSymbols::continuous(2.1));
    EXPECT_GT(mode.sigma.real(), 0.0);
    EXPECT_NEAR(mode.sigma.imag(), 0.0, 1e-9);
    double peak_psi = 0.0;
    int peak_n = 0;
    for (std::size_t j = 0; j < mode.psi.size(); ++j) {
        peak_psi = std::max(peak_psi, std::abs(mode.psi[j]));
        if (std::abs(mode.n[j]) > std::abs(mode.n[peak_n])) peak_n = static_cast<int>(j);
    }
    EXPECT_NEAR(peak_psi, 1.0, 1e-12);
    EXPECT_EQ(mode.psi.front(), 0.0);
    EXPECT_EQ(mode.psi.back(), 0.0);
    EXPECT_LT(problem->basic().z[peak_n], problem->basic().sublayer_height + 0.2);
}

TEST(Linstab, NeutralCsv) {
    NeutralCurveResult r;
    r.k = {1.0, 2.0};
    r.R = {300.0, 290.0};
    std::ostringstream out;
    write_neutral_csv(r, out);
    EXPECT_EQ(out.str(), "k,R_neutral\n1,300\n2,290\n");
}
