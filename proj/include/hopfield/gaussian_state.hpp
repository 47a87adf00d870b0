#pragma once

/* Two-mode Gaussian states of the Hopfield model.
 *
 * Quadratures are x = (o + o')/sqrt(2), p = i(o' - o)/sqrt(2), ordered
 * (x_a, p_a, x_b, p_b) in the bare basis and (x_U, p_U, x_L, p_L) in the
 * polariton basis. The vacuum covariance is I/2.
 */

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hopfield/errors.hpp"
#include "hopfield/model.hpp"

namespace hopfield {

enum class QuadratureBasis { bare, polariton };

inline const char* to_string(QuadratureBasis b) {
    return b == QuadratureBasis::bare ? "bare" : "polariton";
}

/// Block-diagonal symplectic form, [xi_i, xi_j] = i Omega_ij.
inline Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = omega(2, 3) = 1.0;
    omega(1, 0) = omega(3, 2) = -1.0;
    return omega;
}

/// Symmetric 4x4 second-moment matrix with a basis tag. Stored symmetrized.
class CovarianceMatrix {
public:
    CovarianceMatrix() = default;
    CovarianceMatrix(const Eigen::Matrix4d& m, QuadratureBasis basis)
        : entries_(0.5 * (m + m.transpose())), basis_(basis) {}

    static CovarianceMatrix vacuum(QuadratureBasis basis = QuadratureBasis::bare) {
        return {0.5 * Eigen::Matrix4d::Identity(), basis};
    }

    [[nodiscard]] const Eigen::Matrix4d& entries() const { return entries_; }
    [[nodiscard]] QuadratureBasis basis() const { return basis_; }
    [[nodiscard]] double operator()(int i, int j) const { return entries_(i, j); }

    [[nodiscard]] Eigen::Matrix2d block_a() const { return entries_.topLeftCorner<2, 2>(); }
    [[nodiscard]] Eigen::Matrix2d block_b() const { return entries_.bottomRightCorner<2, 2>(); }
    /// Lower-left block C of [[A, C^T], [C, B]].
    [[nodiscard]] Eigen::Matrix2d block_c() const { return entries_.bottomLeftCorner<2, 2>(); }

private:
    Eigen::Matrix4d entries_ = 0.5 * Eigen::Matrix4d::Identity();
    QuadratureBasis basis_ = QuadratureBasis::bare;
};

/// Symplectic eigenvalues (nu_-, nu_+) of a positive-definite matrix.
///
/// Computed as the positive spectrum of the Hermitian matrix i R Omega R
/// with R = sqrt(m), which is stable even when nu_- ~ nu_+.
inline std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& m) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (m + m.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw UnphysicalStateError("covariance matrix is not positive definite");
    }
    const Eigen::Matrix4d root = es.operatorSqrt();
    const Eigen::Matrix4d k = root * symplectic_form() * root;
    const Eigen::Matrix4cd herm = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(herm, Eigen::EigenvaluesOnly);
    return {hs.eigenvalues()(2), hs.eigenvalues()(3)};
}

/// Gamma + i Omega / 2 >= 0, checked as nu_- >= 1/2 - tol.
inline bool is_physical(const CovarianceMatrix& g, double tol = 1e-10) {
    try {
        return symplectic_eigenvalues(g.entries())[0] >= 0.5 - tol;
    } catch (const UnphysicalStateError&) {
        return false;
    }
}

/// Reservoir temperature and Ohmic slopes of the common bath.
struct Environment {
    double temperature = 0.0;
    double gamma_a = 0.01;
    double gamma_b = 0.01;

    void validate() const {
        if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
        if (!(gamma_a > 0.0) || !(gamma_b > 0.0)) {
            throw std::invalid_argument("Ohmic slopes must be positive");
        }
    }
};

/// Bose-Einstein occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0.
inline double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0.0) || !(temperature >= 0.0)) {
        throw std::invalid_argument("thermal_occupation: requires omega > 0 and T >= 0");
    }
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

/// coth(omega / 2T) evaluated as 1 + 2N.
inline double coth_half(double omega, double temperature) {
    return 1.0 + 2.0 * thermal_occupation(omega, temperature);
}

/// diag(a1, a1, b1, b1) with a1 = (1 + 2N(omega_U))/2, b1 = (1 + 2N(omega_L))/2.
inline CovarianceMatrix polariton_thermal_covariance(const PolaritonBasis& basis, double temperature) {
    const double a1 = 0.5 * coth_half(basis.omega_upper, temperature);
    const double b1 = 0.5 * coth_half(basis.omega_lower, temperature);
    return {Eigen::Vector4d(a1, a1, b1, b1).asDiagonal(), QuadratureBasis::polariton};
}

/// Symplectic map from polariton quadratures to bare quadratures.
struct BasisTransform {
    Eigen::Matrix4d entries = Eigen::Matrix4d::Identity();
};

/// Inverse of a symplectic matrix, -Omega S^T Omega.
inline Eigen::Matrix4d symplectic_inverse(const Eigen::Matrix4d& s) {
    const Eigen::Matrix4d omega = symplectic_form();
    return -omega * s.transpose() * omega;
}

/// The mixing-angle block matrix [[cos U1, -sin U2], [sin U3, cos U4]].
///
/// Its rows are polariton quadratures and its columns bare ones: it maps
/// (x_a, p_a, x_b, p_b) to (x_U, p_U, x_L, p_L). Here g_+(r) = sqrt(r) and
/// g_-(r) = 1/sqrt(r).
inline Eigen::Matrix4d polariton_from_bare_blocks(const ModelParams& p, const PolaritonBasis& basis) {
    detail::require_hopfield_family(p, "polariton_from_bare_blocks");
    using detail::f_minus;
    using detail::f_plus;
    auto g_plus = [](double r) { return f_plus(r) + f_minus(r); };
    auto g_minus = [](double r) { return f_plus(r) - f_minus(r); };
    const double c = std::cos(basis.theta);
    const double s = std::sin(basis.theta);
    const double wu = basis.omega_upper;
    const double wl = basis.omega_lower;
    const double wa = p.omega_a;
    const double wb = p.omega_b;

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = c * g_plus(wu / wa);
    m(1, 1) = c * g_minus(wu / wa);
    m(0, 2) = -s * g_plus(wu / wb);
    m(1, 3) = -s * g_minus(wu / wb);
    m(2, 0) = s * g_plus(wl / wa);
    m(3, 1) = s * g_minus(wl / wa);
    m(2, 2) = c * g_plus(wl / wb);
    m(3, 3) = c * g_minus(wl / wb);
    return m;
}

/// Polariton-to-bare transform for the Hopfield family (inverse of the block matrix).
inline BasisTransform build_transform_u(const ModelParams& p, const PolaritonBasis& basis) {
    return {symplectic_inverse(polariton_from_bare_blocks(p, basis))};
}

/// Polariton-to-bare transform read off a = sum_j (w_j p_j - y_j p_j'), same for b.
///
/// x_a = sum_j (w_j - y_j) x_j,  p_a = sum_j (w_j + y_j) p_j, and likewise
/// for b with (x_j, z_j). Valid for any real Bogoliubov basis.
inline BasisTransform transform_from_coefficients(const PolaritonBasis& basis) {
    const auto& u = basis.upper;
    const auto& l = basis.lower;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = u.w - u.y;
    m(0, 2) = l.w - l.y;
    m(1, 1) = u.w + u.y;
    m(1, 3) = l.w + l.y;
    m(2, 0) = u.x - u.z;
    m(2, 2) = l.x - l.z;
    m(3, 1) = u.x + u.z;
    m(3, 3) = l.x + l.z;
    return {m};
}

/// Gamma_o = U Gamma_p U^T.
///
/// For Gamma_p = diag(a1, a1, b1, b1) the cross block is
/// C = cos(theta) sin(theta) diag(sqrt(wa wb)(b1/wL - a1/wU), (wL b1 - wU a1)/sqrt(wa wb)).
inline CovarianceMatrix to_bare_basis(const CovarianceMatrix& gamma_p, const BasisTransform& u) {
    if (gamma_p.basis() != QuadratureBasis::polariton) {
        throw BasisMismatchError("to_bare_basis: input must be in the polariton basis");
    }
    return {u.entries * gamma_p.entries() * u.entries.transpose(), QuadratureBasis::bare};
}

/// Vacuum of the polaritons mapped to the bare modes: (1/2) T T^T.
inline CovarianceMatrix ground_state_covariance_generic(const PolaritonBasis& basis) {
    const Eigen::Matrix4d t = transform_from_coefficients(basis).entries;
    return {0.5 * t * t.transpose(), QuadratureBasis::bare};
}

/// Closed-form ground state for D = lambda^2/omega_b (uses omega_U omega_L = omega_a omega_b).
inline CovarianceMatrix ground_state_covariance_closed(const ModelParams& p) {
    if (!p.has_natural_diamag()) {
        throw std::invalid_argument("ground_state_covariance_closed: requires D = lambda^2/omega_b");
    }
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    const double sum = wu + wl;
    const double plain = (p.omega_a + p.omega_b) / (2.0 * sum);
    const double shifted = (p.omega_a + 4.0 * p.diamag + p.omega_b) / (2.0 * sum);
    const double cross = p.lambda() / sum;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = plain;
    m(1, 1) = shifted;
    m(2, 2) = shifted;
    m(3, 3) = plain;
    m(0, 2) = m(2, 0) = -cross;
    m(1, 3) = m(3, 1) = cross;
    return {m, QuadratureBasis::bare};
}

/// Closed-form thermal covariance Gamma' of the Hopfield family (any D).
inline CovarianceMatrix thermal_covariance_closed(const ModelParams& p, double temperature) {
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    if (wu - wl < 1e-10 * p.omega_b) {
        throw DegenerateSpectrumError("thermal_covariance_closed: omega_U == omega_L");
    }
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double lam = p.lambda();
    const double cu = coth_half(wu, temperature);
    const double cl = coth_half(wl, temperature);
    const double gap = wl * wl - wu * wu;
    const double wl2b = wl * wl - wb * wb;
    const double wu2b = wu * wu - wb * wb;

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = wa * (cl * wu * wl2b - cu * wl * wu2b) / (2.0 * wl * wu * gap);
    m(1, 1) = (cl * wl * wl2b - cu * wu * wu2b) / (2.0 * wa * gap);
    m(2, 2) = wb * (cu * wl * wl2b - cl * wu * wu2b) / (2.0 * wl * wu * gap);
    m(3, 3) = (cu * wu * wl2b - cl * wl * wu2b) / (2.0 * wb * gap);
    m(0, 2) = m(2, 0) = lam * wa * wb * (cl * wu - cu * wl) / (wl * wu * gap);
    m(1, 3) = m(3, 1) = lam * (cl * wl - cu * wu) / gap;
    return {m, QuadratureBasis::bare};
}

/// Closed-form D = 0 covariance in terms of the normalizations N_j.
///
/// The closed-form elements G_11..G_44 are ordered (p_a, x_a, p_b, x_b); they
/// are placed into (x_a, p_a, x_b, p_b) here. The
/// x_b variance carries an omega_a^2 factor and N_j uses (wa^2 - w_j^2)^2.
/// At resonance the diagonal blocks use the reduced (equal-subsystem) forms.
inline CovarianceMatrix appendix_c_covariance(const ModelParams& p, double temperature) {
    detail::require_hopfield_family(p, "appendix_c_covariance");
    if (p.diamag != 0.0) throw std::invalid_argument("appendix_c_covariance: requires D = 0");
    const double lam = p.lambda();
    if (!(lam > 0.0)) throw std::invalid_argument("appendix_c_covariance: requires lambda > 0");
    const auto [wu, wl] = polariton_frequencies_analytic(p);
    if (wu - wl < 1e-10 * p.omega_b) {
        throw DegenerateSpectrumError("appendix_c_covariance: omega_U == omega_L");
    }
    const double wa = p.omega_a;
    const double wb = p.omega_b;
    const double l2 = lam * lam;

    auto norm_sq = [&](double w) {
        const double num = (wb + w) * (-4.0 * l2 * wa * wa * wa + (wb + w) * std::pow(wa * wa - w * w, 2) +
                                       4.0 * l2 * wa * w * (wb + 2.0 * w));
        return num / std::pow(2.0 * l2 * wa, 2);
    };
    auto delta = [&](double w) { return std::pow(4.0 * l2 * wa - wa * wa * (wb + w) + w * w * (wb + w), 2); };
    auto xi = [&](double w) { return w * (wb + w) * (-4.0 * l2 * wa + (wb + w) * (wa * wa - w * w)); };

    const double nu = norm_sq(wu) * coth_half(wu, temperature);
    const double nl = norm_sq(wl) * coth_half(wl, temperature);
    const double bl = wb + wl;
    const double bu = wb + wu;
    const double den = bl * bl * bu * bu * std::pow(wl * wl - wu * wu, 2);
    const double q = std::pow(wl - wu, 2) *
                     std::pow(bl * bu * (wa * wa + wl * wu) - 4.0 * l2 * wa * (wb + wl + wu), 2);

    double pa2 = l2 * (nu * bl * bl * std::pow(wa * wa - wl * wl, 2) + nl * bu * bu * std::pow(wa * wa - wu * wu, 2)) /
                 (2.0 * den);
    double xa2 = l2 * wa * wa * (nu * delta(wl) + nl * delta(wu)) / (2.0 * q);
    double pb2 = 2.0 * l2 * l2 * wa * wa * (nu * bl * bl + nl * bu * bu) / den;
    double xb2 = 2.0 * l2 * l2 * wa * wa * (nu * wl * wl * bl * bl + nl * wu * wu * bu * bu) / q;
    const double papb = lam * l2 * wa * (nu * bl * bl * (wa * wa - wl * wl) + nl * bu * bu * (wa * wa - wu * wu)) / den;
    const double xaxb = lam * l2 * wa * wa * (nu * xi(wl) + nl * xi(wu)) / q;

    if (std::abs(wa - wb) <= 1e-12 * wb) {
        const double cu = coth_half(wu, temperature);
        const double cl = coth_half(wl, temperature);
        xa2 = xb2 = (wb * (nu * (2.0 * lam - wb) * (lam + wb - std::sqrt(wb * (2.0 * lam + wb))) +
                           nl * (2.0 * lam + wb) * (lam - wb + std::sqrt(wb * (wb - 2.0 * lam))))) /
                    (16.0 * wb * (4.0 * l2 - wb * wb));
        pa2 = pb2 = 0.25 * (cu * (bu + 2.0 * lam) / bu + cl * (bl - 2.0 * lam) / bl);
    }

    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = xa2;
    m(1, 1) = pa2;
    m(2, 2) = xb2;
    m(3, 3) = pb2;
    m(0, 2) = m(2, 0) = xaxb;
    m(1, 3) = m(3, 1) = papb;
    return {m, QuadratureBasis::bare};
}

/// Normal modes of the quadrature Hamiltonian via the Williamson decomposition.
struct NormalModes {
    PolaritonFrequencies frequencies;
    Eigen::Matrix4d to_bare = Eigen::Matrix4d::Identity();  ///< symplectic, normal-mode -> bare
};

/// Williamson decomposition of Hq = R^2: K = R Omega R is antisymmetric and
/// its eigenvectors give the normal-mode frame. Handles degenerate spectra.
inline NormalModes normal_modes(const ModelParams& p) {
    const Eigen::Matrix4d hq = quadrature_hamiltonian(p);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(hq);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw InstabilityError("quadrature Hamiltonian is not positive definite");
    }
    const Eigen::Matrix4d root = es.operatorSqrt();
    const Eigen::Matrix4d k = root * symplectic_form() * root;
    const Eigen::Matrix4cd herm = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(herm);

    // Eigenvalues ascending: -w_U, -w_L, w_L, w_U. Mode j uses column 3 - j.
    Eigen::Matrix4d frame;
    Eigen::Vector4d freq;
    for (int j = 0; j < 2; ++j) {
        const Eigen::Vector4cd v = hs.eigenvectors().col(3 - j);
        frame.col(2 * j) = std::sqrt(2.0) * v.imag();
        frame.col(2 * j + 1) = std::sqrt(2.0) * v.real();
        freq(2 * j) = freq(2 * j + 1) = hs.eigenvalues()(3 - j);
    }
    NormalModes modes;
    modes.frequencies = {freq(0), freq(2)};
    modes.to_bare = root.inverse() * frame * freq.cwiseSqrt().asDiagonal();
    return modes;
}

/// Gibbs state of an arbitrary stable bilinear model; T = 0 gives the ground state.
inline CovarianceMatrix gibbs_covariance(const ModelParams& p, double temperature) {
    const NormalModes modes = normal_modes(p);
    const double a1 = 0.5 * coth_half(modes.frequencies.upper, temperature);
    const double b1 = 0.5 * coth_half(modes.frequencies.lower, temperature);
    const Eigen::Matrix4d d = Eigen::Vector4d(a1, a1, b1, b1).asDiagonal();
    return {modes.to_bare * d * modes.to_bare.transpose(), QuadratureBasis::bare};
}

/// One header line "# basis: <tag>" followed by four rows of %.12g values.
inline void write_covariance(std::ostream& os, const CovarianceMatrix& g) {
    os << "# basis: " << to_string(g.basis()) << '\n';
    char buf[64];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            std::snprintf(buf, sizeof buf, "%.12g", g(i, j));
            os << (j ? " " : "") << buf;
        }
        os << '\n';
    }
}

inline CovarianceMatrix read_covariance(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_covariance: empty input");
    QuadratureBasis basis;
    if (line == "# basis: bare") {
        basis = QuadratureBasis::bare;
    } else if (line == "# basis: polariton") {
        basis = QuadratureBasis::polariton;
    } else {
        throw std::runtime_error("read_covariance: bad header '" + line + "'");
    }
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (!(is >> m(i, j))) throw std::runtime_error("read_covariance: truncated matrix");
        }
    }
    return {m, basis};
}

}  // namespace hopfield
