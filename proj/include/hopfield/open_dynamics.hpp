#pragma once

/* Common-reservoir dynamics of the polariton second moments. */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "hopfield/errors.hpp"
#include "hopfield/gaussian_state.hpp"
#include "hopfield/model.hpp"

namespace hopfield {

using cplx = std::complex<double>;

/// Collective absorption (up) and emission (down) rates per branch.
struct RateSet {
    double up_U = 0.0;
    double down_U = 0.0;
    double up_L = 0.0;
    double down_L = 0.0;

    double up(int j) const { return j == 0 ? up_U : up_L; }
    double down(int j) const { return j == 0 ? down_U : down_L; }
    /// Upsilon_j = up_j - down_j, the coherence decay rate (negative when damped).
    double upsilon(int j) const { return up(j) - down(j); }
    double max_rate() const { return std::max({up_U, down_U, up_L, down_L}); }
};

/// Ohmic absorption rate gamma * omega * N(omega).
inline double ohmic_absorption(double gamma, double omega, double temperature) {
    return gamma * omega * thermal_occupation(omega, temperature);
}

/// Ohmic emission rate gamma * omega * (N(omega) + 1).
inline double ohmic_emission(double gamma, double omega, double temperature) {
    return gamma * omega * (thermal_occupation(omega, temperature) + 1.0);
}

/// Gamma(+-w_j) = (sqrt(G_A) W_j + sqrt(G_B) X_j)^2 with W = w - y, X = x - z.
///
/// Real square roots are used, so the two paths can interfere destructively.
inline RateSet collective_rates(const PolaritonBasis& basis, const Environment& env) {
    env.validate();
    RateSet r;
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        const double om = basis.frequency(j);
        const double wj = c.w - c.y;
        const double xj = c.x - c.z;
        auto amp = [&](double rate_a, double rate_b) {
            const double s = std::sqrt(rate_a) * wj + std::sqrt(rate_b) * xj;
            return s * s;
        };
        const double T = env.temperature;
        const double up = amp(ohmic_absorption(env.gamma_a, om, T), ohmic_absorption(env.gamma_b, om, T));
        const double down = amp(ohmic_emission(env.gamma_a, om, T), ohmic_emission(env.gamma_b, om, T));
        if (j == 0) {
            r.up_U = up;
            r.down_U = down;
        } else {
            r.up_L = up;
            r.down_L = down;
        }
    }
    return r;
}

/// <p_j' p_j>, <p_j^2> and <p_U' p_L>.
struct SecondMoments {
    double occ_U = 0.0;
    double occ_L = 0.0;
    cplx sq_U{0.0, 0.0};
    cplx sq_L{0.0, 0.0};
    cplx cross{0.0, 0.0};

    static SecondMoments vacuum() { return {}; }
};

namespace detail {

struct MomentState {
    double occ[2];
    cplx sq[2];
    cplx cross;
};

inline MomentState to_state(const SecondMoments& m) { return {{m.occ_U, m.occ_L}, {m.sq_U, m.sq_L}, m.cross}; }

inline SecondMoments from_state(const MomentState& s) { return {s.occ[0], s.occ[1], s.sq[0], s.sq[1], s.cross}; }

inline MomentState moment_rhs(const MomentState& s, const RateSet& r, const double freq[2]) {
    MomentState d{};
    for (int j = 0; j < 2; ++j) {
        d.occ[j] = -r.down(j) * s.occ[j] + r.up(j) * (s.occ[j] + 1.0);
        d.sq[j] = cplx(r.upsilon(j), -2.0 * freq[j]) * s.sq[j];
    }
    d.cross = cplx(0.5 * (r.upsilon(0) + r.upsilon(1)), freq[0] - freq[1]) * s.cross;
    return d;
}

inline MomentState axpy(const MomentState& s, double h, const MomentState& d) {
    MomentState out;
    for (int j = 0; j < 2; ++j) {
        out.occ[j] = s.occ[j] + h * d.occ[j];
        out.sq[j] = s.sq[j] + h * d.sq[j];
    }
    out.cross = s.cross + h * d.cross;
    return out;
}

inline double dynamics_scale(const RateSet& r, const PolaritonBasis& basis) {
    return std::max({basis.omega_upper, r.max_rate(), basis.omega_upper - basis.omega_lower});
}

}  // namespace detail

/// Step size used when the caller passes dt <= 0.
inline double default_time_step(const RateSet& r, const PolaritonBasis& basis) {
    return 0.05 / detail::dynamics_scale(r, basis);
}

using TrajectoryCallback = std::function<void(double, const SecondMoments&)>;

/// Fixed-step RK4 integration of the second-moment equations up to t_final.
///
/// A non-positive dt selects default_time_step. The last step is shortened to land on t_final.
/// When given, on_sample is called at t = 0 and then every sample_every steps and at the end.
inline SecondMoments evolve_second_moments(const SecondMoments& initial, const RateSet& rates,
                                           const PolaritonBasis& basis, double t_final, double dt = 0.0,
                                           const TrajectoryCallback& on_sample = {}, long sample_every = 1) {
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve_second_moments: t_final must be >= 0");
    const double scale = detail::dynamics_scale(rates, basis);
    if (dt <= 0.0) dt = 0.05 / scale;
    if (dt * scale > 0.1) {
        throw StepSizeError("evolve_second_moments: dt * max(rate, frequency) exceeds 0.1");
    }
    if (sample_every < 1) sample_every = 1;
    const double freq[2] = {basis.omega_upper, basis.omega_lower};
    auto state = detail::to_state(initial);
    const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    if (on_sample) on_sample(0.0, initial);
    for (long k = 0; k < steps; ++k) {
        const double h = std::min(dt, t_final - k * dt);
        const auto k1 = detail::moment_rhs(state, rates, freq);
        const auto k2 = detail::moment_rhs(detail::axpy(state, 0.5 * h, k1), rates, freq);
        const auto k3 = detail::moment_rhs(detail::axpy(state, 0.5 * h, k2), rates, freq);
        const auto k4 = detail::moment_rhs(detail::axpy(state, h, k3), rates, freq);
        for (int j = 0; j < 2; ++j) {
            state.occ[j] += h / 6.0 * (k1.occ[j] + 2.0 * k2.occ[j] + 2.0 * k3.occ[j] + k4.occ[j]);
            state.sq[j] += h / 6.0 * (k1.sq[j] + 2.0 * k2.sq[j] + 2.0 * k3.sq[j] + k4.sq[j]);
        }
        state.cross += h / 6.0 * (k1.cross + 2.0 * k2.cross + 2.0 * k3.cross + k4.cross);
        if (on_sample && ((k + 1) % sample_every == 0 || k + 1 == steps)) {
            on_sample(std::min(t_final, (k + 1) * dt), detail::from_state(state));
        }
    }
    return detail::from_state(state);
}

/// occ_j = up_j / (down_j - up_j), all coherences zero.
inline SecondMoments steady_state_second_moments(const RateSet& rates) {
    SecondMoments m;
    for (int j = 0; j < 2; ++j) {
        const double gap = rates.down(j) - rates.up(j);
        if (!(gap > 0.0)) {
            throw NoSteadyStateError("steady_state_second_moments: emission does not exceed absorption on branch " +
                                     std::string(j == 0 ? "U" : "L"));
        }
        (j == 0 ? m.occ_U : m.occ_L) = rates.up(j) / gap;
    }
    return m;
}

/// Polariton-basis covariance, order (x_U, p_U, x_L, p_L). <p_U p_L> is taken as zero.
inline CovarianceMatrix polariton_covariance(const SecondMoments& m) {
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    const double occ[2] = {m.occ_U, m.occ_L};
    const cplx sq[2] = {m.sq_U, m.sq_L};
    for (int j = 0; j < 2; ++j) {
        const int k = 2 * j;
        g(k, k) = occ[j] + 0.5 + sq[j].real();
        g(k + 1, k + 1) = occ[j] + 0.5 - sq[j].real();
        g(k, k + 1) = g(k + 1, k) = sq[j].imag();
    }
    g(0, 2) = g(2, 0) = m.cross.real();
    g(1, 3) = g(3, 1) = m.cross.real();
    g(0, 3) = g(3, 0) = m.cross.imag();
    g(1, 2) = g(2, 1) = -m.cross.imag();
    return CovarianceMatrix(g, QuadratureBasis::polariton);
}

/// Coefficients of the global dissipator rewritten on the bare operators v = (a, b, a', b').
///
/// kappa(m, n) multiplies R[v_m, v_n] rho = v_m rho v_n' - {v_n' v_m, rho}/2. Entry (0, 0)
/// is therefore down |w|^2 + up |y|^2 summed over branches, (1, 1) its b counterpart.
struct LocalGenerator {
    Eigen::Matrix4d kappa = Eigen::Matrix4d::Zero();

    double coefficient(int m, int n) const { return kappa(m, n); }
    double a_damping() const { return kappa(0, 0); }
    double b_damping() const { return kappa(1, 1); }
    /// Largest |kappa| among entries mixing a-side and b-side operators.
    double max_cross() const {
        double out = 0.0;
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                if ((m % 2) != (n % 2)) out = std::max(out, std::abs(kappa(m, n)));
            }
        }
        return out;
    }
};

namespace detail {

inline Eigen::Vector4d annihilation_row(const BogoliubovCoeffs& c) { return {c.w, c.x, c.y, c.z}; }
inline Eigen::Vector4d creation_row(const BogoliubovCoeffs& c) { return {c.y, c.z, c.w, c.x}; }

/// [v_k, v_m] for v = (a, b, a', b').
inline Eigen::Matrix4d bare_commutators() {
    Eigen::Matrix4d z = Eigen::Matrix4d::Zero();
    z(0, 2) = z(1, 3) = 1.0;
    z(2, 0) = z(3, 1) = -1.0;
    return z;
}

inline int dagger_index(int n) { return (n + 2) % 4; }

}  // namespace detail

/// Expands sum_j down_j D[p_j] + up_j D[p_j'] with p_j = w a + x b + y a' + z b'.
inline LocalGenerator local_representation_coefficients(const PolaritonBasis& basis, const RateSet& rates) {
    LocalGenerator g;
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        const auto ann = detail::annihilation_row(c);
        const auto cre = detail::creation_row(c);
        g.kappa += rates.down(j) * ann * ann.transpose() + rates.up(j) * cre * cre.transpose();
    }
    return g;
}

/// d<v_k v_l>/dt for the bare moment matrix, from the Hamiltonian and a local dissipator.
inline Eigen::Matrix4cd bare_moment_rhs(const ModelParams& p, const LocalGenerator& gen,
                                        const Eigen::Matrix4cd& moments) {
    const Eigen::Matrix4d zc = detail::bare_commutators();
    const Eigen::Matrix4d m = build_dynamical_matrix(p).entries;
    // L'(v_k) = sum_n A(k, n) v_n.
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    a -= cplx(0.0, 1.0) * m.cast<cplx>();
    for (int k = 0; k < 4; ++k) {
        for (int mi = 0; mi < 4; ++mi) {
            for (int n = 0; n < 4; ++n) {
                const double kap = gen.kappa(mi, n);
                if (kap == 0.0) continue;
                a(k, detail::dagger_index(n)) += 0.5 * kap * zc(k, mi);
                a(k, mi) -= 0.5 * kap * zc(k, detail::dagger_index(n));
            }
        }
    }
    Eigen::Matrix4cd rhs = a * moments + moments * a.transpose();
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            double c = 0.0;
            for (int mi = 0; mi < 4; ++mi) {
                for (int n = 0; n < 4; ++n) c -= gen.kappa(mi, n) * zc(k, detail::dagger_index(n)) * zc(l, mi);
            }
            rhs(k, l) += c;
        }
    }
    return rhs;
}

/// (N(w_U) - N(w_L)) cos 2 theta.
inline double asymmetry_diagnostic(const PolaritonBasis& basis, double temperature) {
    return (thermal_occupation(basis.omega_upper, temperature) - thermal_occupation(basis.omega_lower, temperature)) *
           basis.cos_2theta();
}

/// Root of cos 2 theta = 0 in omega_a at fixed lambda, with D = lambda^2 / omega_b.
inline double resonant_balance_frequency(double lambda, double omega_b = 1.0) {
    if (!(lambda > 0.0) || !(omega_b > 0.0)) {
        throw std::invalid_argument("resonant_balance_frequency: lambda and omega_b must be > 0");
    }
    const double l2 = lambda * lambda;
    const double wb2 = omega_b * omega_b;
    return (-4.0 * l2 + std::sqrt(16.0 * l2 * l2 + 4.0 * wb2 * wb2)) / (2.0 * omega_b);
}

}  // namespace hopfield
