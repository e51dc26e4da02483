/// @file harness.hpp
/// @brief Experiment orchestration for the limit and stability studies:
///        joint viscosity/conduction amplitudes to zero against an adiabatic
///        reference, viscosity to zero at fixed conduction, conduction to
///        zero, and perturbation stability with a Gronwall-type envelope fit.

#ifndef POLYTHERM_HARNESS_HPP
#define POLYTHERM_HARNESS_HPP

#include <string>
#include <vector>

#include "polytherm/csv.hpp"
#include "polytherm/identity.hpp"
#include "polytherm/solver.hpp"

namespace polytherm {

enum class ExperimentKind {
    adiabatic_limit,        // (mu0, k0) -> 0 jointly
    zero_viscosity,         // mu0 -> 0 at fixed k0
    heat_to_adiabatic,      // k0 -> 0 with mu0 = 0
    perturbation_stability  // eps-perturbed initial data, both runs adiabatic
};

struct SweepSpec {
    ExperimentKind kind = ExperimentKind::adiabatic_limit;
    std::vector<double> ladder;       // decreasing amplitudes (>= 3 rungs)
    std::vector<double> eps_ladder;   // perturbation amplitudes
    double fixed_k0 = 1e-2;           // counterpart amplitude for zero_viscosity
    CoeffKind coeff_kind = CoeffKind::constant;
    InitialParams init;
    double t_end = 0.25;
    int frame_stride = 10;
    int ref_factor = 1;               // reference resolution multiplier
    double theta_floor = 0.5;         // enforced on zero_viscosity candidates
    double hyperviscosity = 0.05;
    double slope_lo = 0.8, slope_hi = 1.2;
    bool emit_identity_series = false;  // per-rung relative-entropy report data
};

struct RungResult {
    double mu0 = 0, k0 = 0, eps = 0;
    double sup_i = 0;             // sup over frames of the relative-entropy integral
    double final_i = 0;
    double driver_integral = 0;   // time integral of the theorem's driver term
    double c1 = 0, c2 = 0;        // envelope fit (perturbation mode)
    double envelope_cover = 0;    // fraction of frames below the envelope
    double gronwall_c = 0;        // fitted per-step growth constant
    double gronwall_cover = 0;    // fraction of steps obeying dI/dt <= C I + driver
    bool aborted = false;
    std::string note;
    IdentitySeries identity;      // populated when emit_identity_series is set
};

struct SweepResult {
    ExperimentKind kind{};
    std::vector<RungResult> rungs;
    double slope = 0;             // log-log slope of sup_I vs amplitude
    bool monotone = false;
    bool slope_in_window = false;
    double quad_ratio = 0;        // I(T; eps) / I(T; eps/10) for adjacent decade rungs
    bool c2_stable = false;
    std::string verdict;          // PASS | WARN | FAIL
    std::vector<std::string> notes;

    CsvTable to_csv() const;
    std::string summary_json() const;
    std::string plot_script(const std::string& csv_name) const;
};

template <int D>
SweepResult run_sweep(const SweepSpec& spec, const FreeEnergy<D>& law, const Grid<D>& grid);

/// Least-squares slope of log(y) against log(x), skipping nonpositive pairs.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace polytherm

#endif  // POLYTHERM_HARNESS_HPP
