#pragma once

/* Hopfield light-matter model: parameters, the Hopfield-Bogoliubov dynamical
 * matrix and its diagonalization into upper/lower polariton branches.
 *
 * All frequencies are in units of the matter frequency omega_b unless the
 * caller chooses otherwise; hbar = k_B = 1.
 */

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "hopfield/errors.hpp"

namespace hopfield {

/// Parameters of H = (wa+2D) a'a + wb b'b + l1 (a'b + ab') + l2 (a'b' + ab) + D (a'a' + aa).
struct ModelParams {
    double omega_a = 1.0;
    double omega_b = 1.0;
    double lambda1 = 0.0;  ///< mode-mixing (beam splitter) coupling
    double lambda2 = 0.0;  ///< mode-squeezing coupling
    double diamag = 0.0;   ///< diamagnetic coefficient D

    /// lambda1 = lambda2 = lambda and D = lambda^2 / omega_b.
    static ModelParams hopfield(double omega_a, double omega_b, double lambda) {
        return general(omega_a, omega_b, lambda, lambda, lambda * lambda / omega_b);
    }

    /// lambda1 = lambda2 = lambda without the A^2 term.
    static ModelParams no_a2(double omega_a, double omega_b, double lambda) {
        return general(omega_a, omega_b, lambda, lambda, 0.0);
    }

    static ModelParams general(double omega_a, double omega_b, double lambda1,
                               double lambda2, double diamag) {
        ModelParams p{omega_a, omega_b, lambda1, lambda2, diamag};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
            throw std::invalid_argument("mode frequencies must be positive");
        }
        if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !(diamag >= 0.0)) {
            throw std::invalid_argument("couplings and diamagnetic term must be non-negative");
        }
    }

    /// Equal mixing and squeezing couplings; the closed forms apply.
    [[nodiscard]] bool is_hopfield_family() const { return lambda1 == lambda2; }

    /// D = lambda^2/omega_b, the light-natural-matter value.
    [[nodiscard]] bool has_natural_diamag(double rel_tol = 1e-12) const {
        const double expected = lambda1 * lambda1 / omega_b;
        return is_hopfield_family() &&
               std::abs(diamag - expected) <= rel_tol * std::max(expected, 1e-300) + 1e-300;
    }

    [[nodiscard]] double lambda() const { return lambda1; }
};

/// Coupling at which the lower polariton softens when D = 0.
inline double critical_coupling(double omega_a, double omega_b) {
    if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
        throw std::invalid_argument("critical_coupling: frequencies must be positive");
    }
    return std::sqrt(omega_a * omega_b) / 2.0;
}

/// Commutator matrix: [v, H] = M v for v = (a, b, a', b').
struct DynamicalMatrix {
    Eigen::Matrix4d entries = Eigen::Matrix4d::Zero();
};

inline DynamicalMatrix build_dynamical_matrix(const ModelParams& p) {
    const double wa = p.omega_a + 2.0 * p.diamag;
    const double d2 = 2.0 * p.diamag;
    const double l1 = p.lambda1;
    const double l2 = p.lambda2;
    DynamicalMatrix m;
    // clang-format off
    m.entries <<  wa,   l1,  d2,   l2,
                  l1,   p.omega_b, l2, 0.0,
                 -d2,  -l2, -wa,  -l1,
                 -l2,  0.0, -l1,  -p.omega_b;
    // clang-format on
    return m;
}

/// Quadrature Hamiltonian: H = 1/2 xi^T Hq xi (+ const) with xi = (x_a, p_a, x_b, p_b).
inline Eigen::Matrix4d quadrature_hamiltonian(const ModelParams& p) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h(0, 0) = p.omega_a + 4.0 * p.diamag;
    h(1, 1) = p.omega_a;
    h(2, 2) = p.omega_b;
    h(3, 3) = p.omega_b;
    h(0, 2) = h(2, 0) = p.lambda1 + p.lambda2;
    h(1, 3) = h(3, 1) = p.lambda1 - p.lambda2;
    return h;
}

/// Hq positive definite, i.e. a ground state exists.
inline bool is_stable(const ModelParams& p) {
    const Eigen::LLT<Eigen::Matrix4d> llt(quadrature_hamiltonian(p));
    return llt.info() == Eigen::Success;
}

/// Coefficients of p_j = w a + x b + y a' + z b'.
struct BogoliubovCoeffs {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] Eigen::Vector4d as_vector() const { return {w, x, y, z}; }
    BogoliubovCoeffs operator-() const { return {-w, -x, -y, -z}; }
};

/// |w|^2 + |x|^2 - |y|^2 - |z|^2, equal to [p_j, p_j'].
inline double bogoliubov_norm(const BogoliubovCoeffs& c) {
    return c.w * c.w + c.x * c.x - c.y * c.y - c.z * c.z;
}

struct PolaritonBasis {
    double omega_upper = 0.0;
    double omega_lower = 0.0;
    double theta = 0.0;  ///< mixing angle in [-pi/2, 0]
    BogoliubovCoeffs upper;
    BogoliubovCoeffs lower;

    [[nodiscard]] double cos_2theta() const { return std::cos(2.0 * theta); }
    [[nodiscard]] const BogoliubovCoeffs& branch(int j) const { return j == 0 ? upper : lower; }
    [[nodiscard]] double frequency(int j) const { return j == 0 ? omega_upper : omega_lower; }
};

/// [p_U, p_L'] = w_U w_L + x_U x_L - y_U y_L - z_U z_L.
inline double cross_orthogonality(const PolaritonBasis& b) {
    const auto& u = b.upper;
    const auto& l = b.lower;
    return u.w * l.w + u.x * l.x - u.y * l.y - u.z * l.z;
}

/// [p_U, p_L] = w_U y_L + x_U z_L - y_U w_L - z_U x_L.
inline double cross_commutator(const PolaritonBasis& b) {
    const auto& u = b.upper;
    const auto& l = b.lower;
    return u.w * l.y + u.x * l.z - u.y * l.w - u.z * l.x;
}

struct PolaritonFrequencies {
    double upper = 0.0;
    double lower = 0.0;
};

namespace detail {

inline double f_plus(double r) { return 0.5 * (std::sqrt(r) + 1.0 / std::sqrt(r)); }
inline double f_minus(double r) { return 0.5 * (std::sqrt(r) - 1.0 / std::sqrt(r)); }

inline void require_hopfield_family(const ModelParams& p, const char* who) {
    if (!p.is_hopfield_family()) {
        throw std::invalid_argument(std::string(who) + ": requires lambda1 == lambda2");
    }
}

// Mixing angle recovered from the coefficient norms: cos^2 = w_U^2 - y_U^2.
inline double theta_from_coeffs(const BogoliubovCoeffs& u) {
    const double c2 = std::max(0.0, u.w * u.w - u.y * u.y);
    const double s2 = std::max(0.0, u.x * u.x - u.z * u.z);
    return -std::atan2(std::sqrt(s2), std::sqrt(c2));
}

}  // namespace detail

/// Closed-form polariton frequencies for lambda1 = lambda2 (any D).
///
/// omega_L^2 is evaluated as det/omega_U^2, which keeps the stability
/// boundary exact: det = wa wb (wb (wa + 4D) - 4 lambda^2).
inline PolaritonFrequencies polariton_frequencies_analytic(const ModelParams& p) {
    detail::require_hopfield_family(p, "polariton_frequencies_analytic");
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double lam = p.lambda();
    const double shifted = wa * wa + 4.0 * p.diamag * wa;
    const double mean = 0.5 * (shifted + wb * wb);
    const double half_diff = 0.5 * (shifted - wb * wb);
    const double root = std::sqrt(half_diff * half_diff + 4.0 * lam * lam * wa * wb);
    const double upper_sq = mean + root;
    const double det = wa * wb * (wb * (wa + 4.0 * p.diamag) - 4.0 * lam * lam);
    if (!(det > 0.0)) {
        throw InstabilityError("lower polariton frequency is not real (lambda >= lambda_C)");
    }
    return {std::sqrt(upper_sq), std::sqrt(det / upper_sq)};
}

/// Hopfield coefficients from the mixing angle and f_pm(x) = (sqrt(x) +- 1/sqrt(x))/2.
inline PolaritonBasis hopfield_coefficients(const ModelParams& p) {
    detail::require_hopfield_family(p, "hopfield_coefficients");
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    if (wu - wl < 1e-10 * p.omega_b) {
        throw DegenerateSpectrumError("omega_U == omega_L: mixing angle undefined");
    }
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double gap_sq = (wu - wl) * (wu + wl);
    const double cos2 = (wa * wa + 4.0 * p.diamag * wa - wb * wb) / gap_sq;
    const double sin2 = -(4.0 * p.lambda() * std::sqrt(wa * wb)) / gap_sq;
    const double theta = 0.5 * std::atan2(sin2, cos2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    using detail::f_minus;
    using detail::f_plus;
    PolaritonBasis b;
    b.omega_upper = wu;
    b.omega_lower = wl;
    b.theta = theta;
    b.upper = {c * f_plus(wu / wa), -s * f_plus(wu / wb), c * f_minus(wu / wa), -s * f_minus(wu / wb)};
    b.lower = {s * f_plus(wl / wa), c * f_plus(wl / wb), s * f_minus(wl / wa), c * f_minus(wl / wb)};
    return b;
}

/// Numerical Bogoliubov diagonalization of an arbitrary bilinear model.
///
/// The coefficient vectors are left eigenvectors of M (eigenvectors of M^T)
/// with positive eigenvalue, scaled to unit Bogoliubov norm with w_j > 0.
inline PolaritonBasis bogoliubov_diagonalize_numeric(const DynamicalMatrix& m) {
    const double scale = std::abs(m.entries(1, 1));
    const Eigen::EigenSolver<Eigen::Matrix4d> solver(m.entries.transpose());
    if (solver.info() != Eigen::Success) {
        throw Error("eigen-decomposition of the dynamical matrix failed");
    }
    const Eigen::Vector4cd evals = solver.eigenvalues();
    for (int k = 0; k < 4; ++k) {
        if (std::abs(evals(k).imag()) > 1e-10 * scale) {
            throw InstabilityError("dynamical matrix has complex eigenvalues");
        }
    }

    std::array<std::pair<double, BogoliubovCoeffs>, 2> modes;
    int found = 0;
    for (int k = 0; k < 4; ++k) {
        if (evals(k).real() <= 0.0) continue;
        if (found == 2) throw InstabilityError("more than two positive frequencies");
        Eigen::Vector4cd v = solver.eigenvectors().col(k);
        Eigen::Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        v /= v(pivot) / std::abs(v(pivot));
        Eigen::Vector4d r = v.real();
        const double norm = r(0) * r(0) + r(1) * r(1) - r(2) * r(2) - r(3) * r(3);
        if (!(norm > 0.0)) {
            throw InstabilityError("positive-frequency mode has non-positive Bogoliubov norm");
        }
        r /= std::sqrt(norm);
        if (r(0) < 0.0 || (r(0) == 0.0 && r(1) < 0.0)) r = -r;
        modes[found++] = {evals(k).real(), {r(0), r(1), r(2), r(3)}};
    }
    if (found != 2) throw InstabilityError("zero-frequency mode at the stability boundary");
    if (modes[0].first < modes[1].first) std::swap(modes[0], modes[1]);
    if (modes[0].first - modes[1].first < 1e-10 * scale) {
        throw DegenerateSpectrumError("omega_U == omega_L within 1e-10");
    }

    PolaritonBasis b;
    b.omega_upper = modes[0].first;
    b.omega_lower = modes[1].first;
    b.upper = modes[0].second;
    b.lower = modes[1].second;
    b.theta = detail::theta_from_coeffs(b.upper);
    return b;
}

/// Closed-form D = 0 coefficients, returned in the p_j = w a + x b + y a' + z b' convention.
///
/// The closed forms give right eigenvectors of M, i.e. (w, x, -y, -z); the
/// sign of (y, z) is flipped here. At resonance the reduced forms with
/// normalization M_j are used.
inline PolaritonBasis appendix_c_coefficients(const ModelParams& p) {
    detail::require_hopfield_family(p, "appendix_c_coefficients");
    if (p.diamag != 0.0) throw std::invalid_argument("appendix_c_coefficients: requires D = 0");
    const double lam = p.lambda();
    if (!(lam > 0.0)) throw std::invalid_argument("appendix_c_coefficients: requires lambda > 0");
    const auto freqs = polariton_frequencies_analytic(p);
    const double wa = p.omega_a;
    const double wb = p.omega_b;

    PolaritonBasis b;
    b.omega_upper = freqs.upper;
    b.omega_lower = freqs.lower;
    if (freqs.upper - freqs.lower < 1e-10 * wb) {
        throw DegenerateSpectrumError("omega_U == omega_L");
    }

    if (std::abs(wa - wb) <= 1e-12 * wb) {
        for (int sign : {+1, -1}) {
            const double root = std::sqrt(wa * (wa + 2.0 * sign * lam));
            const double s = (wa + root) / lam;
            const double norm =
                std::sqrt(2.0 * std::pow(lam + sign * (wa + root), 2) - 2.0 * lam * lam) / lam;
            BogoliubovCoeffs c{(s + sign) / norm, (1.0 + sign * s) / norm, sign / norm, 1.0 / norm};
            (sign > 0 ? b.upper : b.lower) = c;
        }
    } else {
        auto branch = [&](double w) {
            const double wt = -(wa + w) * (wb + w) / (2.0 * lam * wa);
            const double xt = -1.0 + (wb + w) * (wa * wa - w * w) / (2.0 * lam * lam * wa);
            const double yt = -(wa - w) * (wb + w) / (2.0 * lam * wa);
            const double norm =
                std::sqrt((wb + w) * (-4.0 * lam * lam * wa * wa * wa +
                                      (wb + w) * std::pow(wa * wa - w * w, 2) +
                                      4.0 * lam * lam * wa * w * (wb + 2.0 * w))) /
                (2.0 * lam * lam * wa);
            return BogoliubovCoeffs{wt / norm, xt / norm, -yt / norm, -1.0 / norm};
        };
        b.upper = branch(freqs.upper);
        b.lower = branch(freqs.lower);
    }
    const double gap_sq = (freqs.upper - freqs.lower) * (freqs.upper + freqs.lower);
    b.theta = 0.5 * std::atan2(-4.0 * lam * std::sqrt(wa * wb) / gap_sq, (wa * wa - wb * wb) / gap_sq);
    return b;
}

}  // namespace hopfield
