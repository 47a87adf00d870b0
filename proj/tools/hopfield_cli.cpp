#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopfield/hopfield.hpp"

using namespace hopfield;

namespace {

struct Options {
    double wa = 1.0;
    double wb = 1.0;
    double lambda = 0.0;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::string diamag = "auto";
    std::string coupling = "full";
    std::string state = "thermal";
    double temp = 0.0;
    double gamma_a = 0.01;
    double gamma_b = 0.01;
    std::string output;
    bool dump_cov = false;

    std::string scenario = "custom";
    std::vector<std::string> axes;
    unsigned threads = 1;

    double t_final = 100.0;
    double dt = 0.0;
    long samples = 200;
};

// Flags that were given explicitly (command line or config) override preset values.
struct Given {
    CLI::Option* wa = nullptr;
    CLI::Option* wb = nullptr;
    CLI::Option* lambda = nullptr;
    CLI::Option* diamag = nullptr;
    CLI::Option* coupling = nullptr;
    CLI::Option* state = nullptr;
    CLI::Option* temp = nullptr;
};

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

PointSpec point_spec(const Options& o) {
    PointSpec s;
    s.wa = o.wa;
    s.wb = o.wb;
    s.lambda = o.lambda;
    s.lambda1 = o.lambda1;
    s.lambda2 = o.lambda2;
    s.temperature = o.temp;
    s.diamag = DiamagSetting::parse(o.diamag);
    s.coupling = parse_coupling(o.coupling);
    s.state = o.state == "ground" ? StateKind::ground : StateKind::thermal;
    return s;
}

PolaritonBasis basis_for(const ModelParams& p) {
    if (p.is_hopfield_family()) return hopfield_coefficients(p);
    return bogoliubov_diagonalize_numeric(build_dynamical_matrix(p));
}

void print_branch(std::ostream& os, const char* name, double omega, const BogoliubovCoeffs& c) {
    os << "omega_" << name << ' ' << format_number(omega) << '\n';
    os << name << "_coeffs w=" << format_number(c.w) << " x=" << format_number(c.x) << " y=" << format_number(c.y)
       << " z=" << format_number(c.z) << '\n';
}

int cmd_diagonalize(const Options& o, std::ostream& os) {
    const auto p = point_spec(o).params();
    if (!is_stable(p)) {
        os << "unstable\n";
        return 2;
    }
    const auto basis = basis_for(p);
    os << "lambda1 " << format_number(p.lambda1) << "\nlambda2 " << format_number(p.lambda2) << "\nD "
       << format_number(p.diamag) << '\n';
    print_branch(os, "U", basis.omega_upper, basis.upper);
    print_branch(os, "L", basis.omega_lower, basis.lower);
    if (p.is_hopfield_family()) os << "cos_2theta " << format_number(basis.cos_2theta()) << '\n';
    return 0;
}

int cmd_point(const Options& o, std::ostream& os) {
    const auto r = run_point(point_spec(o));
    os << csv_header << '\n' << csv_row(r) << '\n';
    if (o.dump_cov && r.covariance) write_covariance(os, *r.covariance);
    return 0;
}

int cmd_sweep(const Options& o, const Given& g, std::ostream& os) {
    SweepSpec spec = scenario_preset(o.scenario);
    const PointSpec user = point_spec(o);
    PointSpec& b = spec.base;
    if (given(g.wa)) b.wa = user.wa;
    if (given(g.wb)) b.wb = user.wb;
    if (given(g.lambda)) b.lambda = user.lambda;
    if (given(g.diamag)) b.diamag = user.diamag;
    if (given(g.coupling)) b.coupling = user.coupling;
    if (given(g.state)) b.state = user.state;
    if (given(g.temp)) b.temperature = user.temperature;
    if (user.lambda1) b.lambda1 = user.lambda1;
    if (user.lambda2) b.lambda2 = user.lambda2;
    if (!o.axes.empty()) {
        spec.axes.clear();
        for (const auto& a : o.axes) spec.axes.push_back(Axis::parse(a));
    }
    spec.validate();
    write_csv(os, run_sweep(spec, o.threads));
    return 0;
}

int cmd_dynamics(const Options& o, std::ostream& os) {
    const auto p = point_spec(o).params();
    if (!is_stable(p)) throw InstabilityError("dynamics: parameters are outside the stable region");
    const auto basis = basis_for(p);
    const auto rates = collective_rates(basis, Environment{o.temp, o.gamma_a, o.gamma_b});
    const double dt = o.dt > 0.0 ? o.dt : default_time_step(rates, basis);
    const long steps = static_cast<long>(std::ceil(o.t_final / dt - 1e-9));
    const long every = std::max(1L, steps / std::max(1L, o.samples));
    os << "t,occ_U,occ_L,re_sq_U,im_sq_U,re_sq_L,im_sq_L,re_cross,im_cross\n";
    std::optional<SecondMoments> last;
    evolve_second_moments(
        SecondMoments::vacuum(), rates, basis, o.t_final, dt,
        [&](double t, const SecondMoments& m) {
            os << format_number(t);
            for (double v : {m.occ_U, m.occ_L, m.sq_U.real(), m.sq_U.imag(), m.sq_L.real(), m.sq_L.imag(),
                             m.cross.real(), m.cross.imag()}) {
                os << ',' << format_number(v);
            }
            os << '\n';
            last = m;
        },
        every);
    if (o.dump_cov && last) write_covariance(os, to_bare_basis(polariton_covariance(*last), transform_from_coefficients(basis)));
    return 0;
}

int cmd_verify(const Options& o, std::ostream& os) {
    const auto results = verify::run_acceptance(std::max(2u, o.threads));
    os << verify::format_report(results);
    for (const auto& r : results) {
        if (!verify::passed(r)) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hopfield-model polariton correlations"};
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    Given g;
    g.wa = app.add_option("--wa", o.wa, "matter frequency omega_a")->capture_default_str();
    g.wb = app.add_option("--wb", o.wb, "cavity frequency omega_b")->capture_default_str();
    g.lambda = app.add_option("--lambda", o.lambda, "coupling strength")->capture_default_str();
    app.add_option("--lambda1", o.lambda1, "rotating (mixing) coupling, overrides --lambda");
    app.add_option("--lambda2", o.lambda2, "counter-rotating (squeezing) coupling, overrides --lambda");
    g.diamag = app.add_option("--diamag", o.diamag, "auto, zero or a value")->capture_default_str();
    g.coupling = app.add_option("--coupling", o.coupling, "full, squeezing or mixing")
                     ->check(CLI::IsMember({"full", "squeezing", "mixing"}))
                     ->capture_default_str();
    g.state = app.add_option("--state", o.state, "ground or thermal")
                  ->check(CLI::IsMember({"ground", "thermal"}))
                  ->capture_default_str();
    g.temp = app.add_option("--temp", o.temp, "bath temperature")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--gamma-a", o.gamma_a, "matter-bath coupling")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--gamma-b", o.gamma_b, "cavity-bath coupling")->check(CLI::NonNegativeNumber)->capture_default_str();
    app.add_option("--output", o.output, "output path (default stdout)");
    app.add_flag("--dump-cov", o.dump_cov, "append the bare-basis covariance matrix");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

    auto* diag = app.add_subcommand("diagonalize", "polariton frequencies and Bogoliubov coefficients");
    auto* point = app.add_subcommand("point", "correlation report for one parameter point");
    auto* sweep = app.add_subcommand("sweep", "grid sweep as CSV");
    sweep->add_option("--scenario", o.scenario, "figure preset")
        ->check(CLI::IsMember(scenario_names()))
        ->capture_default_str();
    sweep->add_option("--axis", o.axes, "name:start:stop:count, at most two")->expected(0, 2)->take_all();
    auto* dyn = app.add_subcommand("dynamics", "second-moment trajectory from the vacuum");
    dyn->add_option("--t-final", o.t_final, "integration time")->check(CLI::PositiveNumber)->capture_default_str();
    dyn->add_option("--dt", o.dt, "RK4 step, 0 picks one from the rates")->capture_default_str();
    dyn->add_option("--samples", o.samples, "approximate number of output rows")->capture_default_str();
    auto* ver = app.add_subcommand("verify", "run the acceptance checks");

    CLI11_PARSE(app, argc, argv);

    std::unique_ptr<std::ofstream> file;
    if (!o.output.empty()) {
        file = std::make_unique<std::ofstream>(o.output);
        if (!*file) {
            std::cerr << "cannot open " << o.output << '\n';
            return 2;
        }
    }
    std::ostream& os = file ? *file : std::cout;

    try {
        if (*diag) return cmd_diagonalize(o, os);
        if (*point) return cmd_point(o, os);
        if (*sweep) return cmd_sweep(o, g, os);
        if (*dyn) return cmd_dynamics(o, os);
        if (*ver) return cmd_verify(o, os);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
