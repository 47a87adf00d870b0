#pragma once

/* Acceptance checks shared by the CLI `verify` subcommand and the acceptance test. */

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hopfield/correlations.hpp"
#include "hopfield/gaussian_state.hpp"
#include "hopfield/model.hpp"
#include "hopfield/open_dynamics.hpp"
#include "hopfield/sweep.hpp"

namespace hopfield::verify {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;   ///< worst deviation (or violation count for qualitative checks)
    double tolerance = 0.0;
    double budget_s = 0.0;
    double elapsed_s = 0.0;  ///< wall time; kept out of the printed report
    bool over_budget = false;
    std::string detail;
};

/// Random two-mode symplectic matrix from rotations, beam splitters and single-mode squeezers.
inline Eigen::Matrix4d random_symplectic(std::mt19937_64& rng, double max_squeeze = 1.0) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> sq(-max_squeeze, max_squeeze);
    auto rotations = [&] {
        Eigen::Matrix4d r = Eigen::Matrix4d::Zero();
        for (int k = 0; k < 2; ++k) {
            const double a = angle(rng);
            r(2 * k, 2 * k) = r(2 * k + 1, 2 * k + 1) = std::cos(a);
            r(2 * k, 2 * k + 1) = -std::sin(a);
            r(2 * k + 1, 2 * k) = std::sin(a);
        }
        return r;
    };
    auto splitter = [&] {
        const double t = angle(rng);
        Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
        for (int q = 0; q < 2; ++q) {
            b(q, q) = b(2 + q, 2 + q) = std::cos(t);
            b(q, 2 + q) = std::sin(t);
            b(2 + q, q) = -std::sin(t);
        }
        return b;
    };
    Eigen::Vector4d s;
    for (int k = 0; k < 2; ++k) {
        const double r = sq(rng);
        s(2 * k) = std::exp(r);
        s(2 * k + 1) = std::exp(-r);
    }
    return rotations() * splitter() * rotations() * Eigen::Matrix4d(s.asDiagonal()) * rotations() * splitter() *
           rotations();
}

/// Physical bare-basis covariance S diag(n1, n1, n2, n2) S^T with n in [0.5, max_nu].
inline CovarianceMatrix random_covariance(std::mt19937_64& rng, double max_nu = 2.0, double max_squeeze = 1.0) {
    std::uniform_real_distribution<double> nu(0.5, max_nu);
    const double n1 = nu(rng);
    const double n2 = nu(rng);
    const Eigen::Matrix4d s = random_symplectic(rng, max_squeeze);
    const Eigen::Matrix4d d = Eigen::Vector4d(n1, n1, n2, n2).asDiagonal();
    return {s * d * s.transpose(), QuadratureBasis::bare};
}

namespace detail {

inline double max_abs_diff(const Eigen::Matrix4d& a, const Eigen::Matrix4d& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline std::vector<ModelParams> random_hopfield_points(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> wa(0.1, 5.0), wb(0.5, 2.0), lam(0.001, 1.5);
    std::vector<ModelParams> out;
    out.reserve(count);
    while (static_cast<int>(out.size()) < count) {
        const double b = wb(rng);
        const auto p = ModelParams::hopfield(wa(rng), b, lam(rng) * b);
        if (is_stable(p)) out.push_back(p);
    }
    return out;
}

template <typename F>
CheckResult timed(int id, std::string name, double tolerance, double budget, F&& body) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.budget_s = budget;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.over_budget = r.elapsed_s > r.budget_s;
    return r;
}

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace detail

/// 1. omega_U omega_L = omega_a omega_b on random natural-D points.
inline CheckResult check_frequency_product() {
    return detail::timed(1, "frequency product rule", 1e-12, 1.0, [](CheckResult& r) {
        double worst = 0.0;
        for (const auto& p : detail::random_hopfield_points(101, 1000)) {
            const double target = p.omega_a * p.omega_b;
            const auto f = polariton_frequencies_analytic(p);
            worst = std::max(worst, std::abs(f.upper * f.lower - target) / target);
            // Textbook +- form, without the determinant shortcut.
            const double shifted = p.omega_a * p.omega_a + 4.0 * p.diamag * p.omega_a;
            const double mean = 0.5 * (shifted + p.omega_b * p.omega_b);
            const double half = 0.5 * (shifted - p.omega_b * p.omega_b);
            const double root = std::sqrt(half * half + 4.0 * p.lambda() * p.lambda() * target);
            const double prod = std::sqrt(mean + root) * std::sqrt(mean - root);
            worst = std::max(worst, std::abs(prod - target) / target);
        }
        r.measured = worst;
        r.passed = worst < r.tolerance;
    });
}

/// 2. Closed-form coefficients against the numeric eigen-decomposition.
inline CheckResult check_diagonalization_oracle() {
    return detail::timed(2, "analytic vs numeric diagonalization", 1e-9, 5.0, [](CheckResult& r) {
        double freq_dev = 0.0;
        double coeff_dev = 0.0;
        for (const auto& p : detail::random_hopfield_points(101, 1000)) {
            const auto a = hopfield_coefficients(p);
            const auto n = bogoliubov_diagonalize_numeric(build_dynamical_matrix(p));
            freq_dev = std::max({freq_dev, std::abs(a.omega_upper - n.omega_upper) / a.omega_upper,
                                 std::abs(a.omega_lower - n.omega_lower) / a.omega_lower});
            for (int j = 0; j < 2; ++j) {
                const Eigen::Vector4d x = a.branch(j).as_vector().cwiseAbs();
                const Eigen::Vector4d y = n.branch(j).as_vector().cwiseAbs();
                coeff_dev = std::max(coeff_dev, (x - y).cwiseAbs().maxCoeff());
            }
        }
        r.measured = coeff_dev;
        r.detail = "frequency deviation " + detail::fmt("%.3e", freq_dev) + " (tol 1e-10)";
        r.passed = coeff_dev < 1e-9 && freq_dev < 1e-10;
    });
}

/// 3. Without the A^2 term the resonant model destabilizes at lambda = omega_b / 2.
inline CheckResult check_critical_coupling() {
    return detail::timed(3, "critical coupling", 1e-12, 1.0, [](CheckResult& r) {
        double lo = 0.25;
        double hi = 0.75;
        for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (is_stable(ModelParams::no_a2(1.0, 1.0, mid)) ? lo : hi) = mid;
        }
        const double lc = critical_coupling(1.0, 1.0);
        r.measured = std::abs(hi - lc);
        bool ok = r.measured < r.tolerance;
        // The closed-form frequencies must agree with the stability test on both sides.
        ok = ok && is_stable(ModelParams::no_a2(1, 1, lc - 1e-12));
        ok = ok && !is_stable(ModelParams::no_a2(1, 1, lc + 1e-12));
        bool threw = false;
        try {
            polariton_frequencies_analytic(ModelParams::no_a2(1, 1, lc + 1e-12));
        } catch (const InstabilityError&) {
            threw = true;
        }
        ok = ok && threw;
        polariton_frequencies_analytic(ModelParams::no_a2(1, 1, lc - 1e-12));
        r.passed = ok;
    });
}

/// 4. Closed-form thermal covariance against U Gamma_p U^T.
inline CheckResult check_two_route_covariance() {
    return detail::timed(4, "two-route covariance equivalence", 1e-9, 10.0, [](CheckResult& r) {
        const auto lambdas = Axis::linspace("lambda", 0.05, 1.2, 20).values;
        const auto was = Axis::linspace("wa", 0.2, 3.0, 20).values;
        const double temps[] = {0.05, 0.15, 0.25, 0.5, 1.0};
        double worst = 0.0;
        int count = 0;
        for (double lam : lambdas) {
            for (double wa : was) {
                for (double T : temps) {
                    const auto p = ModelParams::hopfield(wa, 1.0, lam);
                    const auto basis = hopfield_coefficients(p);
                    const auto routed = to_bare_basis(polariton_thermal_covariance(basis, T), build_transform_u(p, basis));
                    worst = std::max(worst, detail::max_abs_diff(thermal_covariance_closed(p, T).entries(), routed.entries()));
                    ++count;
                }
            }
        }
        r.measured = worst;
        r.detail = std::to_string(count) + " points";
        r.passed = worst < r.tolerance && count == 2000;
    });
}

/// 5. Second-moment dynamics from vacuum relax to the thermal steady state.
inline CheckResult check_dynamics_convergence() {
    return detail::timed(5, "dynamics vs steady state", 1e-8, 30.0, [](CheckResult& r) {
        const double pts[10][3] = {{1.0, 0.5, 0.25}, {1.0, 0.8, 0.25}, {0.5, 0.3, 0.15}, {2.0, 0.4, 0.2},
                                   {0.8, 0.25, 0.2}, {1.5, 1.0, 0.3},  {1.2, 0.6, 0.1},  {0.7, 0.9, 0.4},
                                   {1.0, 0.2, 0.5},  {3.0, 0.7, 0.25}};
        double worst = 0.0;
        for (const auto& q : pts) {
            const auto p = ModelParams::hopfield(q[0], 1.0, q[1]);
            const double T = q[2];
            const auto basis = hopfield_coefficients(p);
            const auto rates = collective_rates(basis, Environment{T, 0.01, 0.01});
            const double gap = std::min(rates.down_U - rates.up_U, rates.down_L - rates.up_L);
            const auto out = evolve_second_moments(SecondMoments::vacuum(), rates, basis, 50.0 / gap);
            const auto go = to_bare_basis(polariton_covariance(out), build_transform_u(p, basis));
            worst = std::max(worst, detail::max_abs_diff(go.entries(), thermal_covariance_closed(p, T).entries()));
            worst = std::max(worst, std::abs(out.occ_U - thermal_occupation(basis.omega_upper, T)));
            worst = std::max(worst, std::abs(out.occ_L - thermal_occupation(basis.omega_lower, T)));
        }
        r.measured = worst;
        r.passed = worst < r.tolerance;
    });
}

/// 6. Ground-state E_N and steering closed forms against the covariance pipeline.
inline CheckResult check_closed_form_correlations() {
    return detail::timed(6, "closed-form correlation equivalence", 1e-9, 5.0, [](CheckResult& r) {
        double worst = 0.0;
        for (const auto& p : detail::random_hopfield_points(606, 500)) {
            const auto g = ground_state_covariance_generic(bogoliubov_diagonalize_numeric(build_dynamical_matrix(p)));
            const auto st = gaussian_steering(g);
            const double steer = ground_state_steering_closed(p);
            worst = std::max({worst, std::abs(ground_state_en_closed(p) - log_negativity(g)),
                              std::abs(steer - st.a_to_b), std::abs(steer - st.b_to_a)});
        }
        r.measured = worst;
        r.passed = worst < r.tolerance;
    });
}

/// 7. Balance frequency at lambda = 0.25 and equal marginal purities there.
inline CheckResult check_balance_frequency() {
    return detail::timed(7, "balance frequency and purity balance", 5e-5, 1.0, [](CheckResult& r) {
        const double wa = resonant_balance_frequency(0.25, 1.0);
        const double dev = std::abs(wa - 0.8828);
        double mu_dev = 0.0;
        for (double T : {0.05, 0.2, 0.5, 1.0}) {
            const auto mu = purities(thermal_covariance_closed(ModelParams::hopfield(wa, 1.0, 0.25), T));
            mu_dev = std::max(mu_dev, std::abs(mu.mu_a - mu.mu_b));
        }
        r.measured = dev;
        r.detail = "omega_a = " + detail::fmt("%.6f", wa) + ", |mu_a - mu_b| = " + detail::fmt("%.3e", mu_dev) +
                   " (tol 1e-9)";
        r.passed = dev < r.tolerance && mu_dev < 1e-9;
    });
}

/// 8. Qualitative trends and steering classes of the figure scenarios.
inline CheckResult check_figure_trends(unsigned threads = 1) {
    return detail::timed(8, "qualitative figure checks", 0.0, 30.0, [threads](CheckResult& r) {
        std::vector<std::string> failures;

        // (a) ground-state E_N increases with lambda on each trace.
        {
            const auto spec = scenario_preset("fig2a");
            const auto rows = run_sweep(spec, threads);
            const std::size_t n = spec.axes[1].values.size();
            for (std::size_t t = 0; t < spec.axes[0].values.size(); ++t) {
                for (std::size_t k = 1; k < n; ++k) {
                    const auto& prev = rows[t * n + k - 1];
                    const auto& cur = rows[t * n + k];
                    if (!cur.stable || !prev.stable || !(cur.report.e_n > prev.report.e_n)) {
                        failures.push_back("a");
                        break;
                    }
                }
            }
        }
        // (b) E_N does not grow with temperature at fixed lambda.
        {
            const auto spec = scenario_preset("fig3b");
            const auto rows = run_sweep(spec, threads);
            const std::size_t n_t = spec.axes[0].values.size();
            const std::size_t n_l = spec.axes[1].values.size();
            bool ok = true;
            for (std::size_t l = 0; l < n_l && ok; ++l) {
                for (std::size_t t = 1; t < n_t; ++t) {
                    if (rows[t * n_l + l].report.e_n > rows[(t - 1) * n_l + l].report.e_n + 1e-12) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) failures.push_back("b");
        }
        // (c) resonant point with the A^2 term: one-way b -> a, mu_b < mu_ab < mu_a.
        {
            PointSpec s;
            s.lambda = 0.8;
            s.temperature = 0.25;
            const auto res = run_point(s);
            const auto& c = res.report;
            if (!res.stable || c.classification != SteeringClass::OneWayBtoA || !(c.mu_b < c.mu_ab) ||
                !(c.mu_ab < c.mu_a)) {
                failures.push_back("c");
            }
        }
        // (d) resonant model without A^2: no steering anywhere on the stable grid.
        {
            const auto rows = run_sweep(scenario_preset("fig5cd"), threads);
            int stable = 0;
            for (const auto& row : rows) {
                if (!row.stable) continue;
                ++stable;
                if (row.report.classification != SteeringClass::NoWay) {
                    failures.push_back("d");
                    break;
                }
            }
            if (stable == 0) failures.push_back("d");
        }
        // (e) ground states: symmetric steering, two-way whenever present.
        {
            for (const char* name : {"fig2a", "freqs"}) {
                const auto rows = run_sweep(scenario_preset(name), threads);
                bool ok = true;
                for (const auto& row : rows) {
                    const auto& c = row.report;
                    if (std::abs(c.g_ab - c.g_ba) >= 1e-10) ok = false;
                    if (c.g_ab > steering_threshold && c.g_ba > steering_threshold &&
                        c.classification != SteeringClass::TwoWay) {
                        ok = false;
                    }
                }
                if (!ok) {
                    failures.push_back("e");
                    break;
                }
            }
        }
        r.measured = static_cast<double>(failures.size());
        for (const auto& f : failures) r.detail += (r.detail.empty() ? "failed parts: " : ", ") + f;
        if (failures.empty()) r.detail = "parts a-e hold";
        r.passed = failures.empty();
    });
}

using DMinusFn = std::function<double(const CovarianceMatrix&)>;

/// 9. Invariant-based d~_- against the partial-transpose eigenvalue oracle.
inline CheckResult check_ppt_oracle(const DMinusFn& d_minus = {}) {
    return detail::timed(9, "partial-transpose oracle agreement", 1e-10, 5.0, [&d_minus](CheckResult& r) {
        std::mt19937_64 rng(909);
        double worst = 0.0;
        int disagreements = 0;
        for (int k = 0; k < 1000; ++k) {
            const auto g = random_covariance(rng);
            const double formula = d_minus ? d_minus(g) : symplectic_invariants(g).d_minus;
            const double oracle = partial_transpose_min_symplectic(g);
            const double dev = std::abs(formula - oracle);
            worst = std::max(worst, dev);
            if (dev >= 1e-10) ++disagreements;
        }
        r.measured = worst;
        r.detail = std::to_string(disagreements) + " of 1000 matrices disagree";
        r.passed = worst < r.tolerance;
    });
}

inline std::vector<CheckResult> run_core_checks(unsigned threads = 1) {
    return {check_frequency_product(),     check_diagonalization_oracle(),   check_critical_coupling(),
            check_two_route_covariance(),  check_dynamics_convergence(),     check_closed_form_correlations(),
            check_balance_frequency(),     check_figure_trends(threads),     check_ppt_oracle()};
}

inline bool passed(const CheckResult& r) { return r.passed && !r.over_budget; }

/// Timing-independent content of a result, used for the determinism comparison.
inline std::string format_content(const CheckResult& r) {
    std::string line = std::string(r.passed ? "PASS" : "FAIL") + "  criterion " + std::to_string(r.id) + ": " +
                       r.name + "  measured " + detail::fmt("%.3e", r.measured) + "  tol " +
                       detail::fmt("%.1e", r.tolerance);
    if (!r.detail.empty()) line += "  [" + r.detail + "]";
    return line;
}

inline std::string format_line(const CheckResult& r) {
    std::string line = format_content(r);
    if (r.over_budget) line = "FAIL" + line.substr(4) + "  [over runtime budget]";
    return line;
}

inline std::string format_report(const std::vector<CheckResult>& results) {
    std::string out;
    int failed = 0;
    for (const auto& r : results) {
        out += format_line(r) + '\n';
        if (!passed(r)) ++failed;
    }
    out += std::to_string(results.size() - failed) + " of " + std::to_string(results.size()) + " criteria passed\n";
    return out;
}

inline std::string sweep_csv(const SweepSpec& spec, unsigned threads) {
    std::ostringstream os;
    write_csv(os, run_sweep(spec, threads));
    return os.str();
}

/// 10. Repeated runs and different worker counts give byte-identical output.
inline CheckResult check_determinism(const std::vector<CheckResult>& first, unsigned threads = 4) {
    return detail::timed(10, "determinism", 0.0, 10.0, [&first, threads](CheckResult& r) {
        int mismatches = 0;
        const auto again = run_core_checks(threads);
        if (first.size() != again.size()) ++mismatches;
        for (std::size_t k = 0; k < first.size() && k < again.size(); ++k) {
            if (format_content(first[k]) != format_content(again[k])) ++mismatches;
        }
        for (const char* name : {"fig5", "fig3a"}) {
            const auto spec = scenario_preset(name);
            const auto serial = sweep_csv(spec, 1);
            if (serial != sweep_csv(spec, 1)) ++mismatches;
            if (serial != sweep_csv(spec, threads)) ++mismatches;
        }
        r.measured = mismatches;
        r.detail = mismatches == 0 ? "reports and sweeps identical" : std::to_string(mismatches) + " mismatches";
        r.passed = mismatches == 0;
    });
}

/// All ten criteria; the determinism check reruns the first nine.
inline std::vector<CheckResult> run_acceptance(unsigned threads = 4) {
    auto results = run_core_checks(1);
    results.push_back(check_determinism(results, threads));
    return results;
}

}  // namespace hopfield::verify
