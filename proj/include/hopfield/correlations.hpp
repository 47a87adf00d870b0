#pragma once

/* Entanglement and Gaussian steering of the bare modes a and b. */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hopfield/errors.hpp"
#include "hopfield/gaussian_state.hpp"
#include "hopfield/model.hpp"

namespace hopfield {

/// Block determinants and the partially transposed symplectic invariants.
struct SymplecticInvariants {
    double i_a = 0.0;   ///< det A
    double i_b = 0.0;   ///< det B
    double i_c = 0.0;   ///< det C
    double i_ab = 0.0;  ///< det Gamma
    double d_minus = 0.0;
    double d_plus = 0.0;
};

namespace detail {

inline void require_bare_physical(const CovarianceMatrix& g, const char* who) {
    if (g.basis() != QuadratureBasis::bare) {
        throw BasisMismatchError(std::string(who) + ": expects a bare-basis covariance");
    }
    if (!is_physical(g)) {
        throw UnphysicalStateError(std::string(who) + ": covariance violates the uncertainty relation");
    }
}

}  // namespace detail

/// d~_pm = sqrt((Delta~ +- sqrt(Delta~^2 - 4 I_ab))/2) with Delta~ = I_a + I_b - 2 I_c.
///
/// The minus root is taken as 2 I_ab / (Delta~ + sqrt(...)) to avoid cancellation.
inline SymplecticInvariants symplectic_invariants(const CovarianceMatrix& g) {
    detail::require_bare_physical(g, "symplectic_invariants");
    SymplecticInvariants s;
    s.i_a = g.block_a().determinant();
    s.i_b = g.block_b().determinant();
    s.i_c = g.block_c().determinant();
    s.i_ab = g.entries().determinant();
    const double delta = s.i_a + s.i_b - 2.0 * s.i_c;
    const double disc = std::sqrt(std::max(0.0, delta * delta - 4.0 * s.i_ab));
    const double plus_sq = 0.5 * (delta + disc);
    s.d_plus = std::sqrt(plus_sq);
    s.d_minus = std::sqrt(s.i_ab / plus_sq);
    return s;
}

/// Smallest symplectic eigenvalue of the partial transpose (p_b -> -p_b), by eigen-decomposition.
inline double partial_transpose_min_symplectic(const CovarianceMatrix& g) {
    const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
    const Eigen::Matrix4d pt = flip.asDiagonal() * g.entries() * flip.asDiagonal();
    return symplectic_eigenvalues(pt)[0];
}

/// -ln(2 d~_-), without the clip at zero.
inline double log_negativity_raw(const CovarianceMatrix& g) {
    return -std::log(2.0 * symplectic_invariants(g).d_minus);
}

/// E_N = max(0, -ln 2 d~_-).
inline double log_negativity(const CovarianceMatrix& g) { return std::max(0.0, log_negativity_raw(g)); }

struct SteeringPair {
    double a_to_b = 0.0;
    double b_to_a = 0.0;
};

/// (1/2) ln(I_a / 4 I_ab) and (1/2) ln(I_b / 4 I_ab), unclipped.
inline SteeringPair gaussian_steering_raw(const CovarianceMatrix& g) {
    const auto s = symplectic_invariants(g);
    return {0.5 * std::log(s.i_a / (4.0 * s.i_ab)), 0.5 * std::log(s.i_b / (4.0 * s.i_ab))};
}

inline SteeringPair gaussian_steering(const CovarianceMatrix& g) {
    const auto raw = gaussian_steering_raw(g);
    return {std::max(0.0, raw.a_to_b), std::max(0.0, raw.b_to_a)};
}

struct Purities {
    double mu_a = 1.0;
    double mu_b = 1.0;
    double mu_ab = 1.0;
};

/// mu_a = 1/(4 I_a), mu_b = 1/(4 I_b), mu_ab = 1/(16 I_ab).
inline Purities purities(const CovarianceMatrix& g) {
    const auto s = symplectic_invariants(g);
    return {1.0 / (4.0 * s.i_a), 1.0 / (4.0 * s.i_b), 1.0 / (16.0 * s.i_ab)};
}

enum class SteeringClass { NoWay, OneWayAtoB, OneWayBtoA, TwoWay };

inline const char* to_string(SteeringClass c) {
    switch (c) {
        case SteeringClass::NoWay: return "NoWay";
        case SteeringClass::OneWayAtoB: return "OneWayAtoB";
        case SteeringClass::OneWayBtoA: return "OneWayBtoA";
        case SteeringClass::TwoWay: return "TwoWay";
    }
    return "?";
}

inline constexpr double steering_threshold = 1e-12;

inline SteeringClass classify_steering(double g_ab, double g_ba) {
    if (g_ab < 0.0 || g_ba < 0.0) throw std::invalid_argument("classify_steering: negative steering");
    const bool ab = g_ab > steering_threshold;
    const bool ba = g_ba > steering_threshold;
    if (ab && ba) return SteeringClass::TwoWay;
    if (ab) return SteeringClass::OneWayAtoB;
    if (ba) return SteeringClass::OneWayBtoA;
    return SteeringClass::NoWay;
}

struct Occupations {
    double n_a = 0.0;
    double n_b = 0.0;
};

/// N_m = (<x_m^2> + <p_m^2> - 1)/2.
inline Occupations average_occupations(const CovarianceMatrix& g) {
    detail::require_bare_physical(g, "average_occupations");
    return {0.5 * (g(0, 0) + g(1, 1) - 1.0), 0.5 * (g(2, 2) + g(3, 3) - 1.0)};
}

/// Normally and anti-normally ordered bare-mode moments for real coefficients.
struct CorrelatorTable {
    double ad_a = 0.0;    ///< <a'a>
    double a_ad = 0.0;    ///< <aa'>
    double ad_ad = 0.0;   ///< <a'^2>
    double a_a = 0.0;     ///< <a^2>
    double bd_b = 0.0;    ///< <b'b>
    double b_bd = 0.0;    ///< <bb'>
    double bd_bd = 0.0;   ///< <b'^2>
    double b_b = 0.0;     ///< <b^2>
    double bd_ad = 0.0;   ///< <b'a'>
    double ad_b = 0.0;    ///< <a'b>
    double a_bd = 0.0;    ///< <ab'>
    double a_b = 0.0;     ///< <ab>
};

/// Moments from a = sum_j (w_j p_j - y_j p_j') with <p_j' p_j> = n_j and no coherences.
inline CorrelatorTable second_order_correlators(const PolaritonBasis& basis, double occ_upper, double occ_lower) {
    if (occ_upper < 0.0 || occ_lower < 0.0) {
        throw std::invalid_argument("second_order_correlators: occupations must be >= 0");
    }
    CorrelatorTable t;
    for (int j = 0; j < 2; ++j) {
        const auto& c = basis.branch(j);
        const double n = j == 0 ? occ_upper : occ_lower;
        t.ad_a += (c.w * c.w + c.y * c.y) * n + c.y * c.y;
        t.a_ad += (c.w * c.w + c.y * c.y) * n + c.w * c.w;
        t.ad_ad -= c.w * c.y * (2.0 * n + 1.0);
        t.a_a -= c.w * c.y * (2.0 * n + 1.0);
        t.bd_b += (c.x * c.x + c.z * c.z) * n + c.z * c.z;
        t.b_bd += (c.x * c.x + c.z * c.z) * n + c.x * c.x;
        t.bd_bd -= c.x * c.z * (2.0 * n + 1.0);
        t.b_b -= c.x * c.z * (2.0 * n + 1.0);
        t.bd_ad -= (c.w * c.z + c.x * c.y) * n + c.x * c.y;
        t.ad_b += (c.w * c.x + c.z * c.y) * n + c.z * c.y;
        t.a_bd += (c.w * c.x + c.z * c.y) * n + c.x * c.w;
        t.a_b -= (c.w * c.z + c.x * c.y) * n + c.z * c.w;
    }
    return t;
}

/// Ground-state E_N for the Hopfield family, zeta = (4 D wa + wa^2 + wL wU)(wb^2 + wL wU).
inline double ground_state_en_closed(const ModelParams& p) {
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double zeta = (4.0 * p.diamag * wa + wa * wa + wl * wu) * (wb * wb + wl * wu);
    const double diff = 2.0 * p.lambda() * std::sqrt(wa * wb) - std::sqrt(zeta);
    const double two_d = std::sqrt(diff * diff / (wu * wl)) / (wl + wu);
    return std::max(0.0, -std::log(two_d));
}

/// Ground-state steering (equal in both directions) for the Hopfield family.
inline double ground_state_steering_closed(const ModelParams& p) {
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double lam = p.lambda();
    const double zeta = (4.0 * p.diamag * wa + wa * wa + wl * wu) * (wb * wb + wl * wu);
    const double denom = zeta - 4.0 * lam * lam * wa * wb;
    const double ratio = wl * wu * (wl + wu) * (wl + wu) * zeta / (denom * denom);
    return std::max(0.0, 0.5 * std::log(ratio));
}

/// All correlation measures at one parameter point.
struct CorrelationReport {
    double e_n = 0.0;
    double g_ab = 0.0;
    double g_ba = 0.0;
    double e_n_raw = 0.0;
    double g_ab_raw = 0.0;
    double g_ba_raw = 0.0;
    double mu_a = 1.0;
    double mu_b = 1.0;
    double mu_ab = 1.0;
    double n_a = 0.0;
    double n_b = 0.0;
    SteeringClass classification = SteeringClass::NoWay;
};

inline CorrelationReport correlation_report(const CovarianceMatrix& g) {
    CorrelationReport r;
    r.e_n_raw = log_negativity_raw(g);
    r.e_n = std::max(0.0, r.e_n_raw);
    const auto steer = gaussian_steering_raw(g);
    r.g_ab_raw = steer.a_to_b;
    r.g_ba_raw = steer.b_to_a;
    r.g_ab = std::max(0.0, steer.a_to_b);
    r.g_ba = std::max(0.0, steer.b_to_a);
    const auto mu = purities(g);
    r.mu_a = mu.mu_a;
    r.mu_b = mu.mu_b;
    r.mu_ab = mu.mu_ab;
    const auto occ = average_occupations(g);
    r.n_a = occ.n_a;
    r.n_b = occ.n_b;
    r.classification = classify_steering(r.g_ab, r.g_ba);
    return r;
}

}  // namespace hopfield
