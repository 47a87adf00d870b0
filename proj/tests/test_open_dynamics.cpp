#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hopfield/correlations.hpp"
#include "hopfield/open_dynamics.hpp"

using namespace hopfield;

namespace {

double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Random Hermitian-consistent moment matrix <v_k v_l> is not needed for a linear check:
// any complex matrix exercises the same linear map.
Eigen::Matrix4cd random_moments(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix4cd m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = {n(rng), n(rng)};
    }
    return m;
}

// Rows express (p_U, p_L, p_U', p_L') in terms of (a, b, a', b').
Eigen::Matrix4d polariton_rows(const PolaritonBasis& b) {
    Eigen::Matrix4d c;
    c.row(0) << b.upper.w, b.upper.x, b.upper.y, b.upper.z;
    c.row(1) << b.lower.w, b.lower.x, b.lower.y, b.lower.z;
    c.row(2) << b.upper.y, b.upper.z, b.upper.w, b.upper.x;
    c.row(3) << b.lower.y, b.lower.z, b.lower.w, b.lower.x;
    return c;
}

}  // namespace

TEST(Rates, ZeroTemperature) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5));
    const Environment env{0.0, 0.02, 0.03};
    const auto r = collective_rates(basis, env);
    EXPECT_EQ(r.up_U, 0.0);
    EXPECT_EQ(r.up_L, 0.0);
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        const double om = basis.frequency(j);
        const double amp = std::sqrt(env.gamma_a * om) * (c.w - c.y) + std::sqrt(env.gamma_b * om) * (c.x - c.z);
        EXPECT_NEAR(r.down(j), amp * amp, 1e-15);
    }
}

TEST(Rates, EqualSlopesFactor) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(0.7, 1, 0.4));
    const double g = 0.05;
    const double T = 0.3;
    const auto r = collective_rates(basis, Environment{T, g, g});
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        const double om = basis.frequency(j);
        const double s = (c.w - c.y) + (c.x - c.z);
        const double n = thermal_occupation(om, T);
        EXPECT_NEAR(r.up(j), g * om * n * s * s, 1e-14);
        EXPECT_NEAR(r.down(j), g * om * (n + 1) * s * s, 1e-14);
        EXPECT_GT(r.down(j), r.up(j));
        EXPECT_LT(r.upsilon(j), 0.0);
    }
}

TEST(Rates, DetailedBalanceOnGrid) {
    for (double T : {0.0, 0.05, 0.15, 0.25, 0.5, 1.0, 3.0}) {
        for (double lam : {0.1, 0.5, 0.9}) {
            const auto basis = hopfield_coefficients(ModelParams::hopfield(1.3, 1, lam));
            const auto r = collective_rates(basis, Environment{T, 0.01, 0.02});
            for (int j = 0; j < 2; ++j) {
                const double occ = r.up(j) / (r.down(j) - r.up(j));
                ASSERT_NEAR(occ, thermal_occupation(basis.frequency(j), T), 1e-12 * (1 + occ));
            }
        }
    }
}

TEST(Rates, SteadyStateIndependentOfSlopes) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(0.9, 1, 0.6));
    const auto ref = steady_state_second_moments(collective_rates(basis, Environment{0.3, 0.01, 0.01}));
    for (double ga : {1e-4, 1e-3, 1e-2, 1e-1}) {
        for (double gb : {1e-4, 3e-3, 1e-1}) {
            const auto m = steady_state_second_moments(collective_rates(basis, Environment{0.3, ga, gb}));
            ASSERT_NEAR(m.occ_U, ref.occ_U, 1e-12);
            ASSERT_NEAR(m.occ_L, ref.occ_L, 1e-12);
        }
    }
}

TEST(SteadyState, Values) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5));
    const auto zero = steady_state_second_moments(collective_rates(basis, Environment{0.0, 0.01, 0.01}));
    EXPECT_EQ(zero.occ_U, 0.0);
    EXPECT_EQ(zero.occ_L, 0.0);
    const auto m = steady_state_second_moments(collective_rates(basis, Environment{0.15, 0.01, 0.01}));
    EXPECT_NEAR(m.occ_U, thermal_occupation(1.618034, 0.15), 1e-8);
    EXPECT_NEAR(m.occ_L, thermal_occupation(0.618034, 0.15), 1e-7);
    EXPECT_EQ(m.sq_U, cplx(0.0));
    EXPECT_EQ(m.cross, cplx(0.0));
    EXPECT_THROW(steady_state_second_moments(RateSet{0.1, 0.1, 0.0, 0.2}), NoSteadyStateError);
}

TEST(Evolve, FixedPointIsStationary) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5));
    const auto rates = collective_rates(basis, Environment{0.25, 0.01, 0.01});
    const auto ss = steady_state_second_moments(rates);
    const auto out = evolve_second_moments(ss, rates, basis, 100.0);
    EXPECT_NEAR(out.occ_U, ss.occ_U, 1e-10);
    EXPECT_NEAR(out.occ_L, ss.occ_L, 1e-10);
    EXPECT_LT(std::abs(out.sq_U), 1e-10);
    EXPECT_LT(std::abs(out.cross), 1e-10);
}

TEST(Evolve, RelaxesToThermalOccupations) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5));
    const auto rates = collective_rates(basis, Environment{0.25, 0.05, 0.05});
    const double slowest = std::min(rates.down_U - rates.up_U, rates.down_L - rates.up_L);
    const auto out = evolve_second_moments(SecondMoments::vacuum(), rates, basis, 40.0 / slowest);
    EXPECT_NEAR(out.occ_U, thermal_occupation(basis.omega_upper, 0.25), 1e-8);
    EXPECT_NEAR(out.occ_L, thermal_occupation(basis.omega_lower, 0.25), 1e-8);
}

TEST(Evolve, SqueezingEnvelope) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.3));
    const auto rates = collective_rates(basis, Environment{0.2, 0.05, 0.05});
    SecondMoments init;
    init.sq_U = 1.0;
    init.cross = cplx(0.3, -0.2);
    for (double t : {1.0, 10.0, 50.0}) {
        const auto out = evolve_second_moments(init, rates, basis, t, 0.005);
        const double envelope = std::exp(rates.upsilon(0) * t);
        EXPECT_NEAR(std::abs(out.sq_U), envelope, 1e-6 * envelope);
        const cplx sq = std::exp(cplx(rates.upsilon(0), -2 * basis.omega_upper) * t);
        EXPECT_LT(std::abs(out.sq_U - sq), 1e-6 * envelope);
        const cplx expected = std::exp(cplx(0.5 * (rates.upsilon(0) + rates.upsilon(1)),
                                            basis.omega_upper - basis.omega_lower) * t) *
                              init.cross;
        EXPECT_LT(std::abs(out.cross - expected), 1e-6 * std::abs(expected));
    }
}

TEST(Evolve, StepSizeGuardAndTrajectory) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5));
    const auto rates = collective_rates(basis, Environment{0.25, 0.01, 0.01});
    EXPECT_THROW(evolve_second_moments(SecondMoments::vacuum(), rates, basis, 1.0, 0.1), StepSizeError);
    int samples = 0;
    double last_t = -1;
    evolve_second_moments(SecondMoments::vacuum(), rates, basis, 1.0, 0.01,
                          [&](double t, const SecondMoments&) {
                              ++samples;
                              last_t = t;
                          },
                          10);
    EXPECT_EQ(samples, 11);
    EXPECT_DOUBLE_EQ(last_t, 1.0);
}

TEST(PolaritonCovariance, ThermalSteadyState) {
    const auto p = ModelParams::hopfield(0.8, 1, 0.6);
    const auto basis = hopfield_coefficients(p);
    const double T = 0.3;
    const auto ss = steady_state_second_moments(collective_rates(basis, Environment{T, 0.01, 0.01}));
    const auto gp = polariton_covariance(ss);
    EXPECT_LT(max_abs_diff(gp.entries(), polariton_thermal_covariance(basis, T).entries()), 1e-12);
    const auto go = to_bare_basis(gp, build_transform_u(p, basis));
    EXPECT_LT(max_abs_diff(go.entries(), thermal_covariance_closed(p, T).entries()), 1e-10);
}

TEST(PolaritonCovariance, CoherencesArePhysicalQuadratures) {
    // A squeezed-rotated polariton state: check the quadrature map against direct operator algebra.
    SecondMoments m;
    m.occ_U = 0.4;
    m.occ_L = 0.2;
    m.sq_U = cplx(0.1, 0.2);
    m.sq_L = cplx(-0.05, 0.0);
    m.cross = cplx(0.05, -0.03);
    const auto g = polariton_covariance(m);
    EXPECT_NEAR(g(0, 0), 0.5 * (2 * m.sq_U.real() + 2 * m.occ_U + 1), 1e-15);
    EXPECT_NEAR(g(1, 1), 0.5 * (-2 * m.sq_U.real() + 2 * m.occ_U + 1), 1e-15);
    EXPECT_NEAR(g(0, 1), m.sq_U.imag(), 1e-15);
    EXPECT_TRUE(is_physical(g));
}

TEST(ConvergenceOnGrid, DynamicsMatchClosedForm) {
    for (double lam : {0.2, 0.6}) {
        for (double T : {0.1, 0.4}) {
            for (double wa : {0.6, 1.4}) {
                const auto p = ModelParams::hopfield(wa, 1, lam);
                const auto basis = hopfield_coefficients(p);
                const auto rates = collective_rates(basis, Environment{T, 0.05, 0.05});
                const double slowest = std::min(rates.down_U - rates.up_U, rates.down_L - rates.up_L);
                const auto out = evolve_second_moments(SecondMoments::vacuum(), rates, basis, 40.0 / slowest);
                const auto go = to_bare_basis(polariton_covariance(out), build_transform_u(p, basis));
                ASSERT_LT(max_abs_diff(go.entries(), thermal_covariance_closed(p, T).entries()), 1e-8);
            }
        }
    }
}

TEST(LocalGenerator, GlobalEquivalenceOnRandomMoments) {
    std::mt19937_64 rng(77);
    for (auto p : {ModelParams::hopfield(1, 1, 0.5), ModelParams::no_a2(1.4, 1, 0.3), ModelParams::hopfield(0.6, 1, 0.9)}) {
        const auto basis = hopfield_coefficients(p);
        const auto rates = collective_rates(basis, Environment{0.3, 0.02, 0.05});
        const auto gen = local_representation_coefficients(basis, rates);
        const Eigen::Matrix4cd c = polariton_rows(basis).cast<cplx>();
        for (int k = 0; k < 20; ++k) {
            const Eigen::Matrix4cd bare = random_moments(rng);
            const Eigen::Matrix4cd d_bare = bare_moment_rhs(p, gen, bare);
            // Polariton moments P = C M C^T and their derivative.
            const Eigen::Matrix4cd pm = c * bare * c.transpose();
            const Eigen::Matrix4cd dp = c * d_bare * c.transpose();
            for (int j = 0; j < 2; ++j) {
                const double om = basis.frequency(j);
                // <p_j' p_j>
                const cplx occ = pm(2 + j, j);
                ASSERT_LT(std::abs(dp(2 + j, j) - (-rates.down(j) * occ + rates.up(j) * (occ + 1.0))), 1e-10);
                // <p_j^2>
                ASSERT_LT(std::abs(dp(j, j) - cplx(rates.upsilon(j), -2 * om) * pm(j, j)), 1e-10);
            }
            // <p_U' p_L>
            const cplx rate(0.5 * (rates.upsilon(0) + rates.upsilon(1)), basis.omega_upper - basis.omega_lower);
            ASSERT_LT(std::abs(dp(2, 1) - rate * pm(2, 1)), 1e-10);
        }
    }
}

TEST(LocalGenerator, DiagonalFamilies) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(0.8, 1, 0.5));
    const auto rates = collective_rates(basis, Environment{0.3, 0.01, 0.01});
    const auto gen = local_representation_coefficients(basis, rates);
    double a = 0, b = 0;
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        a += rates.down(j) * c.w * c.w + rates.up(j) * c.y * c.y;
        b += rates.down(j) * c.x * c.x + rates.up(j) * c.z * c.z;
    }
    EXPECT_NEAR(gen.a_damping(), a, 1e-15);
    EXPECT_NEAR(gen.b_damping(), b, 1e-15);
    EXPECT_TRUE(gen.kappa.isApprox(gen.kappa.transpose()));
}

TEST(LocalGenerator, ResonantSymmetryWithoutDiamagneticTerm) {
    const auto basis = hopfield_coefficients(ModelParams::no_a2(1, 1, 0.3));
    const auto gen = local_representation_coefficients(basis, collective_rates(basis, Environment{0.25, 0.01, 0.01}));
    EXPECT_NEAR(gen.a_damping(), gen.b_damping(), 1e-14);
}

TEST(LocalGenerator, DiamagneticTermBreaksSymmetry) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(1, 1, 0.3));
    const auto gen = local_representation_coefficients(basis, collective_rates(basis, Environment{0.25, 0.01, 0.01}));
    EXPECT_GT(std::abs(gen.a_damping() - gen.b_damping()), 1e-6);
}

TEST(LocalGenerator, DecouplingLimit) {
    const auto basis = hopfield_coefficients(ModelParams::hopfield(2, 1, 1e-7));
    const auto gen = local_representation_coefficients(basis, collective_rates(basis, Environment{0.25, 0.01, 0.01}));
    EXPECT_LT(gen.max_cross(), 1e-8);
}

TEST(Asymmetry, Diagnostic) {
    EXPECT_EQ(asymmetry_diagnostic(hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5)), 0.0), 0.0);
    EXPECT_NEAR(asymmetry_diagnostic(hopfield_coefficients(ModelParams::no_a2(1, 1, 0.3)), 0.25), 0.0, 1e-14);
    EXPECT_GT(std::abs(asymmetry_diagnostic(hopfield_coefficients(ModelParams::hopfield(1, 1, 0.5)), 0.25)), 1e-3);
}

TEST(Asymmetry, NoOneWaySteeringWithoutDiamagneticTerm) {
    for (double lam = 0.02; lam < 0.5; lam += 0.02) {
        for (double T : {0.0, 0.1, 0.25, 0.5}) {
            const auto r = correlation_report(thermal_covariance_closed(ModelParams::no_a2(1, 1, lam), T));
            ASSERT_NEAR(r.g_ab, r.g_ba, 1e-10);
            ASSERT_TRUE(r.classification == SteeringClass::NoWay || r.classification == SteeringClass::TwoWay);
        }
    }
}

TEST(BalanceFrequency, ReferenceValueAndPurityBalance) {
    const double wa = resonant_balance_frequency(0.25, 1);
    EXPECT_NEAR(wa, 0.8828, 5e-5);
    const auto p = ModelParams::hopfield(wa, 1, 0.25);
    EXPECT_NEAR(hopfield_coefficients(p).cos_2theta(), 0.0, 1e-12);
    const auto mu = purities(thermal_covariance_closed(p, 0.2));
    EXPECT_NEAR(mu.mu_a, mu.mu_b, 1e-9);
    EXPECT_NEAR(resonant_balance_frequency(1e-6, 1), 1.0, 1e-9);
    EXPECT_THROW(resonant_balance_frequency(0, 1), std::invalid_argument);
}
