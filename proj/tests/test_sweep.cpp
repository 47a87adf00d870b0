#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "hopfield/sweep.hpp"
#include "hopfield/verify.hpp"

using namespace hopfield;

namespace {

int count_fields(const std::string& line) {
    int n = 1;
    for (char c : line) n += c == ',';
    return n;
}

}  // namespace

TEST(RunPoint, ResonantOneWayPoint) {
    PointSpec s;
    s.lambda = 0.8;
    s.temperature = 0.25;
    const auto r = run_point(s);
    ASSERT_TRUE(r.stable);
    EXPECT_EQ(r.report.classification, SteeringClass::OneWayBtoA);
    EXPECT_NEAR(r.frequencies.upper * r.frequencies.lower, 1.0, 1e-12);
    ASSERT_TRUE(r.covariance.has_value());
    EXPECT_TRUE(is_physical(*r.covariance));
}

TEST(RunPoint, GroundStateCheckValues) {
    PointSpec s;
    s.lambda = 0.5;
    s.state = StateKind::ground;
    const auto r = run_point(s);
    ASSERT_TRUE(r.stable);
    EXPECT_NEAR(r.report.e_n, 0.43350736, 1e-8);
    EXPECT_NEAR(r.report.g_ab, 0.09116078, 1e-8);
    EXPECT_EQ(r.report.classification, SteeringClass::TwoWay);
}

TEST(RunPoint, NoSteeringWithoutDiamagneticTerm) {
    PointSpec s;
    s.lambda = 0.45;
    s.temperature = 0.25;
    s.diamag = DiamagSetting::parse("zero");
    const auto r = run_point(s);
    ASSERT_TRUE(r.stable);
    EXPECT_EQ(r.report.g_ab, 0.0);
    EXPECT_EQ(r.report.g_ba, 0.0);
    EXPECT_EQ(r.report.classification, SteeringClass::NoWay);
}

TEST(RunPoint, UnstableWithoutDiamagneticTerm) {
    PointSpec s;
    s.lambda = 0.6;
    s.diamag = DiamagSetting::parse("zero");
    const auto r = run_point(s);
    EXPECT_FALSE(r.stable);
    EXPECT_FALSE(r.covariance.has_value());
}

TEST(RunPoint, DegenerateSqueezingOnlyFallsBack) {
    PointSpec s;
    s.lambda = 0.4;
    s.coupling = CouplingKind::squeezing;
    s.diamag = DiamagSetting::parse("zero");
    s.temperature = 0.1;
    const auto r = run_point(s);
    ASSERT_TRUE(r.stable);
    EXPECT_NEAR(r.frequencies.upper, r.frequencies.lower, 1e-9);
    EXPECT_TRUE(is_physical(*r.covariance));
}

TEST(RunPoint, SeparateCouplingsOverrideKind) {
    PointSpec s;
    s.lambda = 0.3;
    s.lambda1 = 0.2;
    s.lambda2 = 0.1;
    s.diamag = DiamagSetting::parse("0.05");
    const auto p = s.params();
    EXPECT_DOUBLE_EQ(p.lambda1, 0.2);
    EXPECT_DOUBLE_EQ(p.lambda2, 0.1);
    EXPECT_DOUBLE_EQ(p.diamag, 0.05);
    EXPECT_TRUE(run_point(s).stable);
}

TEST(Diamag, Parse) {
    EXPECT_EQ(DiamagSetting::parse("auto").mode, DiamagSetting::Mode::automatic);
    EXPECT_EQ(DiamagSetting::parse("zero").mode, DiamagSetting::Mode::zero);
    EXPECT_EQ(DiamagSetting::parse("0.25").to_string(), "0.25");
    EXPECT_THROW(DiamagSetting::parse("-1"), std::invalid_argument);
    EXPECT_THROW(DiamagSetting::parse("0.2x"), std::invalid_argument);
}

TEST(Axis, ParseAndLinspace) {
    const auto a = Axis::parse("lambda:0:1:11");
    EXPECT_EQ(a.name, "lambda");
    ASSERT_EQ(a.values.size(), 11u);
    EXPECT_DOUBLE_EQ(a.values.front(), 0.0);
    EXPECT_DOUBLE_EQ(a.values.back(), 1.0);
    EXPECT_THROW(Axis::parse("lambda:0:1"), std::invalid_argument);
    EXPECT_THROW(Axis::parse("lambda:0:x:3"), std::invalid_argument);
}

TEST(SweepSpec, Validation) {
    SweepSpec s;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.axes = {Axis::linspace("lambda", 0, 1, 3), Axis::linspace("lambda", 0, 1, 3)};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.axes = {Axis::linspace("lambda", 0, 1, 3), Axis::linspace("wa", 0.5, 1, 2), Axis::linspace("T", 0, 1, 2)};
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s.axes = {Axis{"lambda", {0.1}}};
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(SweepSpec, RowMajorOrder) {
    SweepSpec s;
    s.axes = {Axis{"wa", {0.5, 2.0}}, Axis{"lambda", {0.1, 0.2, 0.3}}};
    ASSERT_EQ(s.size(), 6u);
    EXPECT_DOUBLE_EQ(s.point(0).wa, 0.5);
    EXPECT_DOUBLE_EQ(s.point(2).lambda, 0.3);
    EXPECT_DOUBLE_EQ(s.point(3).wa, 2.0);
    EXPECT_DOUBLE_EQ(s.point(3).lambda, 0.1);
}

TEST(Presets, AllNamesResolve) {
    for (const auto& name : scenario_names()) {
        const auto s = scenario_preset(name);
        if (name == "custom") continue;
        EXPECT_NO_THROW(s.validate()) << name;
        EXPECT_FALSE(s.description.empty()) << name;
    }
    EXPECT_THROW(scenario_preset("fig99"), std::invalid_argument);
}

TEST(Presets, NoDiamagResonanceBecomesUnstable) {
    const auto rows = run_sweep(scenario_preset("fig5cd"));
    for (const auto& r : rows) EXPECT_EQ(r.stable, r.spec.lambda < 0.5) << r.spec.lambda;
}

TEST(Presets, OffResonantOneWayDirection) {
    // wa = 2, D = 0, T = 0.25: the one-way window points from b to a.
    const auto rows = run_sweep(scenario_preset("fig8"));
    int one_way = 0;
    for (const auto& r : rows) {
        if (!r.stable) continue;
        EXPECT_NE(r.report.classification, SteeringClass::OneWayAtoB) << r.spec.lambda;
        if (r.report.classification == SteeringClass::OneWayBtoA) {
            ++one_way;
            EXPECT_GT(r.spec.lambda, 0.05);
        }
    }
    EXPECT_GT(one_way, 0);
}

TEST(Presets, OffResonantWindowsAtFixedCoupling) {
    const auto rows = run_sweep(scenario_preset("fig6"));
    for (const auto& r : rows) {
        ASSERT_TRUE(r.stable);
        const auto cls = r.report.classification;
        if (r.spec.wa > 0.35 && r.spec.wa < 0.75) {
            EXPECT_GT(r.report.g_ab, 0.0) << r.spec.wa;
        }
        if (r.spec.wa > 0.95 && r.spec.wa < 1.15) {
            EXPECT_EQ(cls, SteeringClass::TwoWay) << r.spec.wa;
        }
        if (r.spec.wa > 1.35) {
            EXPECT_EQ(cls, SteeringClass::OneWayBtoA) << r.spec.wa;
        }
    }
}

TEST(Csv, HeaderAndRowShape) {
    SweepSpec s;
    s.base.temperature = 0.25;
    s.base.diamag = DiamagSetting::parse("zero");
    s.axes = {Axis{"lambda", {0.2, 0.7}}};
    std::ostringstream os;
    write_csv(os, run_sweep(s));
    std::istringstream is(os.str());
    std::string header, stable, unstable;
    std::getline(is, header);
    std::getline(is, stable);
    std::getline(is, unstable);
    EXPECT_EQ(header, csv_header);
    EXPECT_EQ(count_fields(stable), 16);
    EXPECT_EQ(count_fields(unstable), 16);
    EXPECT_EQ(stable.substr(stable.size() - 4), "true");
    EXPECT_EQ(unstable, "0.7,1,1,0.25,,,,,,,,,,,,false");
}

TEST(Csv, NumberFormat) {
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
    const auto spec = scenario_preset("fig3a");
    EXPECT_EQ(verify::sweep_csv(spec, 1), verify::sweep_csv(spec, 3));
}

TEST(Verify, InjectedSignErrorIsCaught) {
    const auto good = verify::check_ppt_oracle();
    EXPECT_TRUE(good.passed) << good.detail;
    const auto bad = verify::check_ppt_oracle([](const CovarianceMatrix& g) {
        const auto inv = symplectic_invariants(g);
        const double delta = inv.i_a + inv.i_b + 2.0 * inv.i_c;
        return std::sqrt(0.5 * (delta - std::sqrt(std::max(0.0, delta * delta - 4.0 * inv.i_ab))));
    });
    EXPECT_FALSE(bad.passed);
}

TEST(Verify, ReportLines) {
    verify::CheckResult r;
    r.id = 3;
    r.name = "x";
    r.passed = true;
    r.measured = 1e-13;
    r.tolerance = 1e-12;
    EXPECT_EQ(verify::format_line(r), "PASS  criterion 3: x  measured 1.000e-13  tol 1.0e-12");
    r.over_budget = true;
    EXPECT_FALSE(verify::passed(r));
    EXPECT_EQ(verify::format_line(r), "FAIL  criterion 3: x  measured 1.000e-13  tol 1.0e-12  [over runtime budget]");
}
