/// @file test_harness.cpp
/// @brief Sweep orchestration at reduced scale: ladder validation, floor
///        rungs, monotone decay, quadratic perturbation scaling, Gronwall
///        consistency, and the CSV / summary emitters.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polytherm/harness.hpp"

using namespace polytherm;

namespace {

PolyconvexLaw<2> make_default() {
    LawParams p;
    p.gamma = 0.1;
    return PolyconvexLaw<2>(p);
}

SweepSpec mini_spec(ExperimentKind kind) {
    SweepSpec spec;
    spec.kind = kind;
    spec.ladder = {1e-2, 5e-3, 2.5e-3};
    spec.eps_ladder = {1e-2, 1e-3};
    spec.init.kind = InitialKind::sine_shear;
    spec.init.amplitude = 0.05;
    spec.t_end = 0.1;
    spec.frame_stride = 5;
    return spec;
}

}  // namespace

TEST_CASE("loglog slope on exact power data") {
    CHECK(loglog_slope({1.0, 2.0, 4.0}, {1.0, 4.0, 16.0}) == doctest::Approx(2.0));
    CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 6.0, 12.0}) == doctest::Approx(1.0));
    CHECK(loglog_slope({1.0}, {1.0}) == 0.0);  // degenerate
}

TEST_CASE("ladder validation") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::adiabatic_limit);
    spec.ladder = {};
    CHECK_THROWS_AS(run_sweep(spec, law, g), std::invalid_argument);
    spec.ladder = {1e-3, 1e-2};
    CHECK_THROWS_AS(run_sweep(spec, law, g), std::invalid_argument);
}

TEST_CASE("adiabatic limit: monotone decay and an exact zero floor rung") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::adiabatic_limit);
    spec.ladder = {1e-2, 5e-3, 2.5e-3, 0.0};
    const SweepResult res = run_sweep(spec, law, g);
    REQUIRE(res.rungs.size() == 4);
    CHECK(res.monotone);
    CHECK(res.rungs[0].sup_i > res.rungs[1].sup_i);
    CHECK(res.rungs[1].sup_i > res.rungs[2].sup_i);
    // amplitude zero runs the same equations as the reference: identical runs
    CHECK(res.rungs[3].sup_i == 0.0);
    CHECK(res.verdict != "FAIL");
    for (const auto& r : res.rungs) {
        CHECK_FALSE(r.aborted);
        if (r.mu0 > 0.0) CHECK(r.driver_integral > 0.0);
    }
}

TEST_CASE("zero viscosity at fixed conduction: decay in the viscosity amplitude") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::zero_viscosity);
    spec.fixed_k0 = 1e-2;
    const SweepResult res = run_sweep(spec, law, g);
    CHECK(res.monotone);
    for (const auto& r : res.rungs) CHECK(r.k0 == 1e-2);
    CHECK(res.verdict != "FAIL");
}

TEST_CASE("heat to adiabatic: conduction-only ladder") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::heat_to_adiabatic);
    spec.init.kind = InitialKind::thermal_bump;
    spec.init.amplitude = 0.1;
    const SweepResult res = run_sweep(spec, law, g);
    CHECK(res.monotone);
    for (const auto& r : res.rungs) CHECK(r.mu0 == 0.0);
    CHECK(res.verdict != "FAIL");
}

TEST_CASE("perturbation stability: quadratic scaling and envelope") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::perturbation_stability);
    spec.eps_ladder = {1e-2, 1e-3, 0.0};
    const SweepResult res = run_sweep(spec, law, g);
    REQUIRE(res.rungs.size() == 3);
    // eps = 0 reproduces the reference exactly
    CHECK(res.rungs[2].sup_i == 0.0);
    // quadratic coercivity: I(T, eps) / I(T, eps/10) ~ 100
    CHECK(res.quad_ratio == doctest::Approx(100.0).epsilon(0.2));
    for (const auto& r : res.rungs)
        if (r.eps > 0.0) {
            CHECK(r.envelope_cover >= 0.95);
            CHECK(r.c2 >= 0.0);
        }
    CHECK(res.verdict == "PASS");
}

TEST_CASE("gronwall consistency on a viscous rung") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::adiabatic_limit);
    spec.ladder = {1e-2, 5e-3, 2.5e-3};
    const SweepResult res = run_sweep(spec, law, g);
    for (const auto& r : res.rungs) {
        CHECK(r.gronwall_cover >= 0.95);
        CHECK(std::isfinite(r.gronwall_c));
    }
}

TEST_CASE("identity series are emitted on request and carry bounded residuals") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::adiabatic_limit);
    spec.ladder = {1e-2, 5e-3, 2.5e-3};
    spec.emit_identity_series = true;
    const SweepResult res = run_sweep(spec, law, g);
    for (const auto& r : res.rungs) {
        REQUIRE_FALSE(r.identity.t.empty());
        for (double v : r.identity.diss_visc) CHECK(v >= 0.0);
        for (double v : r.identity.diss_heat) CHECK(v >= 0.0);
        for (double v : r.identity.residual_linf) CHECK(std::isfinite(v));
    }
}

TEST_CASE("CSV, summary and plot emitters are well-formed and deterministic") {
    const auto law = make_default();
    const Grid<2> g(16, 1.0);
    SweepSpec spec = mini_spec(ExperimentKind::adiabatic_limit);
    const SweepResult a = run_sweep(spec, law, g);
    const SweepResult b = run_sweep(spec, law, g);

    const CsvTable ta = a.to_csv();
    CHECK(ta.columns.size() == 7);
    CHECK(ta.rows.size() == a.rungs.size());
    CHECK(ta.to_string() == b.to_csv().to_string());
    CHECK(a.summary_json() == b.summary_json());
    CHECK(a.summary_json().find("\"experiment\": \"adiabatic-limit\"") != std::string::npos);
    CHECK(a.plot_script("sweep.csv").find("logscale") != std::string::npos);
}
