#pragma once

/* Point evaluation and figure-style parameter sweeps with CSV output. */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hopfield/correlations.hpp"
#include "hopfield/errors.hpp"
#include "hopfield/gaussian_state.hpp"
#include "hopfield/model.hpp"

namespace hopfield {

enum class StateKind { ground, thermal };

/// How the diamagnetic coefficient follows the coupling.
struct DiamagSetting {
    enum class Mode { automatic, zero, fixed } mode = Mode::automatic;
    double value = 0.0;

    static DiamagSetting parse(const std::string& text) {
        if (text == "auto") return {Mode::automatic, 0.0};
        if (text == "zero") return {Mode::zero, 0.0};
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || !(v >= 0.0)) {
            throw std::invalid_argument("diamag must be auto, zero or a non-negative number: " + text);
        }
        return {Mode::fixed, v};
    }

    std::string to_string() const {
        if (mode == Mode::automatic) return "auto";
        if (mode == Mode::zero) return "zero";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    }
};

/// Which interaction terms carry the coupling lambda.
enum class CouplingKind { full, squeezing, mixing };

inline CouplingKind parse_coupling(const std::string& s) {
    if (s == "full") return CouplingKind::full;
    if (s == "squeezing") return CouplingKind::squeezing;
    if (s == "mixing") return CouplingKind::mixing;
    throw std::invalid_argument("unknown coupling kind: " + s);
}

inline const char* to_string(CouplingKind k) {
    switch (k) {
        case CouplingKind::full: return "full";
        case CouplingKind::squeezing: return "squeezing";
        case CouplingKind::mixing: return "mixing";
    }
    return "?";
}

/// One grid point before it is turned into model parameters.
struct PointSpec {
    double lambda = 0.0;
    double wa = 1.0;
    double wb = 1.0;
    double temperature = 0.0;
    DiamagSetting diamag;
    CouplingKind coupling = CouplingKind::full;
    StateKind state = StateKind::thermal;

    /// Separate lambda1 / lambda2 override the coupling kind when set.
    std::optional<double> lambda1;
    std::optional<double> lambda2;

    ModelParams params() const {
        double l1 = lambda;
        double l2 = lambda;
        if (coupling == CouplingKind::squeezing) l1 = 0.0;
        if (coupling == CouplingKind::mixing) l2 = 0.0;
        if (lambda1) l1 = *lambda1;
        if (lambda2) l2 = *lambda2;
        double d = 0.0;
        switch (diamag.mode) {
            case DiamagSetting::Mode::automatic: d = std::max(l1, l2) * std::max(l1, l2) / wb; break;
            case DiamagSetting::Mode::zero: d = 0.0; break;
            case DiamagSetting::Mode::fixed: d = diamag.value; break;
        }
        return ModelParams::general(wa, wb, l1, l2, d);
    }
};

struct PointResult {
    PointSpec spec;
    bool stable = false;
    PolaritonFrequencies frequencies;
    CorrelationReport report;
    std::optional<CovarianceMatrix> covariance;
};

/// Bare-basis covariance of the requested state.
///
/// Equal couplings with a split spectrum go through the closed forms; everything else
/// (unequal couplings, degenerate spectrum) goes through the normal-mode route.
inline CovarianceMatrix state_covariance(const ModelParams& p, StateKind kind, double temperature) {
    const double T = kind == StateKind::ground ? 0.0 : temperature;
    if (p.is_hopfield_family()) {
        try {
            if (kind == StateKind::ground && p.has_natural_diamag()) return ground_state_covariance_closed(p);
            return thermal_covariance_closed(p, T);
        } catch (const DegenerateSpectrumError&) {
        }
    }
    return gibbs_covariance(p, T);
}

inline PolaritonFrequencies point_frequencies(const ModelParams& p) {
    if (p.is_hopfield_family()) return polariton_frequencies_analytic(p);
    return normal_modes(p).frequencies;
}

/// Diagonalize, build the covariance, evaluate the correlations. Instability is flagged, not thrown.
inline PointResult run_point(const PointSpec& spec) {
    PointResult r;
    r.spec = spec;
    const ModelParams p = spec.params();
    if (!is_stable(p)) return r;
    try {
        r.frequencies = point_frequencies(p);
        auto g = state_covariance(p, spec.state, spec.temperature);
        r.report = correlation_report(g);
        r.covariance = g;
        r.stable = true;
    } catch (const InstabilityError&) {
        r.stable = false;
    } catch (const UnphysicalStateError&) {
        // Numerically indistinguishable from the stability boundary.
        r.stable = false;
    }
    return r;
}

/// Swept parameter with an explicit value list.
struct Axis {
    std::string name;
    std::vector<double> values;

    static Axis linspace(std::string name, double start, double stop, int count) {
        if (count < 2) throw std::invalid_argument("axis " + name + ": count must be >= 2");
        Axis a{std::move(name), {}};
        a.values.reserve(count);
        for (int i = 0; i < count; ++i) {
            a.values.push_back(i + 1 == count ? stop : start + (stop - start) * i / (count - 1));
        }
        return a;
    }

    /// Parses "name:start:stop:count".
    static Axis parse(const std::string& text) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 4) throw std::invalid_argument("axis must be name:start:stop:count, got " + text);
        try {
            return linspace(parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3]));
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).rfind("axis", 0) == 0) throw;
            throw std::invalid_argument("axis has non-numeric fields: " + text);
        }
    }
};

inline const std::vector<std::string>& axis_names() {
    static const std::vector<std::string> names{"lambda", "wa", "wb", "T"};
    return names;
}

inline void assign_axis_value(PointSpec& s, const std::string& name, double v) {
    if (name == "lambda") {
        s.lambda = v;
    } else if (name == "wa") {
        s.wa = v;
    } else if (name == "wb") {
        s.wb = v;
    } else if (name == "T") {
        s.temperature = v;
    } else {
        throw std::invalid_argument("unknown axis name: " + name);
    }
}

struct SweepSpec {
    std::string scenario = "custom";
    std::string description;
    PointSpec base;
    std::vector<Axis> axes;

    void validate() const {
        if (axes.empty() || axes.size() > 2) throw std::invalid_argument("a sweep needs one or two axes");
        for (const auto& a : axes) {
            if (std::find(axis_names().begin(), axis_names().end(), a.name) == axis_names().end()) {
                throw std::invalid_argument("unknown axis name: " + a.name);
            }
            if (a.values.size() < 2) throw std::invalid_argument("axis " + a.name + " needs at least 2 values");
        }
        if (axes.size() == 2 && axes[0].name == axes[1].name) {
            throw std::invalid_argument("swept parameters must be distinct");
        }
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.values.size();
        return n;
    }

    /// Row-major: the first axis is the outer loop.
    PointSpec point(std::size_t index) const {
        PointSpec s = base;
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const std::size_t n = it->values.size();
            assign_axis_value(s, it->name, it->values[index % n]);
            index /= n;
        }
        return s;
    }
};

/// Figure presets. Fixed parameters are exact; axis extents are approximate.
inline SweepSpec scenario_preset(const std::string& name) {
    SweepSpec s;
    s.scenario = name;
    auto lambda_axis = [](int count = 120) { return Axis::linspace("lambda", 0.01, 1.2, count); };
    PointSpec& b = s.base;
    if (name == "fig2a" || name == "fig2b") {
        s.description = "ground state, full coupling, D auto; E_N (a) and steering (b) vs lambda for wa in {0.5, 1, 2}";
        b.state = StateKind::ground;
        s.axes = {Axis{"wa", {0.5, 1.0, 2.0}}, lambda_axis()};
    } else if (name == "fig2c") {
        s.description = "ground state, squeezing-only coupling, D = 0, wa = wb; unstable beyond lambda = 1";
        b.state = StateKind::ground;
        b.coupling = CouplingKind::squeezing;
        b.diamag = DiamagSetting::parse("zero");
        s.axes = {lambda_axis()};
    } else if (name == "fig2d") {
        s.description = "ground state, mixing-only coupling, D = 0, wa = wb";
        b.state = StateKind::ground;
        b.coupling = CouplingKind::mixing;
        b.diamag = DiamagSetting::parse("zero");
        s.axes = {lambda_axis()};
    } else if (name == "fig3a" || name == "fig4") {
        s.description = "thermal T = 0.15, D auto; grid over wa and lambda";
        b.temperature = 0.15;
        s.axes = {Axis::linspace("wa", 0.1, 2.0, 39), lambda_axis(40)};
    } else if (name == "fig3b" || name == "fig4cd") {
        s.description = "thermal, wa = wb, D auto; grid over T and lambda";
        s.axes = {Axis::linspace("T", 0.0, 0.5, 41), lambda_axis(40)};
    } else if (name == "fig5") {
        s.description = "thermal T = 0.25, wa = wb, D auto; correlations and purities vs lambda";
        b.temperature = 0.25;
        s.axes = {lambda_axis()};
    } else if (name == "fig5cd") {
        s.description = "thermal T = 0.25, wa = wb, D = 0; unstable beyond lambda = 0.5";
        b.temperature = 0.25;
        b.diamag = DiamagSetting::parse("zero");
        s.axes = {lambda_axis()};
    } else if (name == "fig6" || name == "fig6a") {
        s.description = "thermal T = 0.2, lambda = 0.25, D auto; correlations and purities vs wa";
        b.temperature = 0.2;
        b.lambda = 0.25;
        s.axes = {Axis::linspace("wa", 0.05, 2.0, 40)};
    } else if (name == "fig6c") {
        s.description = "lambda = 0.25, wa = 0.1, D auto; correlations vs T";
        b.lambda = 0.25;
        b.wa = 0.1;
        s.axes = {Axis::linspace("T", 0.0, 0.5, 51)};
    } else if (name == "fig6d") {
        s.description = "lambda = 0.25, wa = 5, D auto; correlations vs T";
        b.lambda = 0.25;
        b.wa = 5.0;
        s.axes = {Axis::linspace("T", 0.0, 0.5, 51)};
    } else if (name == "fig8") {
        s.description = "thermal T = 0.25, wa = 2 wb, D = 0; unstable beyond lambda = 0.7071";
        b.temperature = 0.25;
        b.wa = 2.0;
        b.diamag = DiamagSetting::parse("zero");
        s.axes = {lambda_axis()};
    } else if (name == "freqs") {
        s.description = "polariton frequencies vs lambda for wa in {0.01, 0.1, 1, 5}, D auto";
        b.state = StateKind::ground;
        s.axes = {Axis{"wa", {0.01, 0.1, 1.0, 5.0}}, lambda_axis()};
    } else if (name == "custom") {
        s.description = "user-defined axes";
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    return s;
}

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig4",
                                                "fig4cd", "fig5", "fig5cd", "fig6", "fig6a", "fig6c", "fig6d",
                                                "fig8", "freqs", "custom"};
    return names;
}

/// Evaluates every grid point; the output order does not depend on the thread count.
inline std::vector<PointResult> run_sweep(const SweepSpec& spec, unsigned threads = 1) {
    spec.validate();
    const std::size_t n = spec.size();
    std::vector<PointResult> rows(n);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) rows[i] = run_point(spec.point(i));
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

inline constexpr const char* csv_header =
    "lambda,wa,wb,T,omega_U,omega_L,E_N,G_ab,G_ba,mu_a,mu_b,mu_ab,N_a,N_b,class,stable";

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

inline std::string csv_row(const PointResult& r) {
    std::string out;
    auto add = [&](const std::string& field) {
        if (!out.empty()) out += ',';
        out += field;
    };
    add(format_number(r.spec.lambda));
    add(format_number(r.spec.wa));
    add(format_number(r.spec.wb));
    add(format_number(r.spec.temperature));
    if (r.stable) {
        const auto& c = r.report;
        for (double v : {r.frequencies.upper, r.frequencies.lower, c.e_n, c.g_ab, c.g_ba, c.mu_a, c.mu_b, c.mu_ab,
                         c.n_a, c.n_b}) {
            add(format_number(v));
        }
        add(to_string(c.classification));
        add("true");
    } else {
        for (int i = 0; i < 11; ++i) add("");
        add("false");
    }
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<PointResult>& rows) {
    os << csv_header << '\n';
    for (const auto& r : rows) os << csv_row(r) << '\n';
}

}  // namespace hopfield
