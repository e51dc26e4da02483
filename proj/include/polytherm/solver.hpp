/// @file solver.hpp
/// @brief RK4 time integration of the augmented thermoviscoelastic system and
///        its thermoelastic / adiabatic variants, with conservation, entropy,
///        constraint and involution diagnostics.

#ifndef POLYTHERM_SOLVER_HPP
#define POLYTHERM_SOLVER_HPP

#include <string>
#include <vector>

#include "polytherm/fields.hpp"
#include "polytherm/rhs.hpp"

namespace polytherm {

enum class ExecPolicy { parallel, serial_reference };

template <int D>
struct RunParams {
    TransportCoeffs coeffs;
    double cfl_hyperbolic = 0.4;
    double cfl_parabolic = 0.25;
    double hyperviscosity = 0.05;   // used only when mu0 = k0 = 0
    double theta_floor = 0.0;       // abort when min theta falls below (0 disables)
    double fixed_dt = 0.0;          // 0 = adaptive from the CFL constraints
    int frame_stride = 10;
    double smoothness_abort_factor = 50.0;
    ExecPolicy exec = ExecPolicy::parallel;
    HeatSupplyFn<D> heat_supply;
};

struct DiagnosticsFrame {
    double t = 0, dt = 0;
    double energy_total = 0;
    double entropy_total = 0;
    double entropy_production_cum = 0;
    double constraint_drift = 0;
    double involution_drift = 0;
    double theta_min = 0;
};

template <int D>
struct RunResult {
    Trajectory<D> traj;
    std::vector<DiagnosticsFrame> diagnostics;
    bool aborted = false;
    std::string abort_reason;
    int steps = 0;
};

enum class InitialKind { rest, sine_shear, thermal_bump, gradient_perturbation };

struct InitialParams {
    InitialKind kind = InitialKind::rest;
    double amplitude = 0.05;
    int mode = 1;
    double theta0 = 1.0;
    double theta_amplitude = 0.0;  // additional temperature modulation
    double v_perturb = 0.0;        // extra velocity mode, amplitude eps
    int v_mode = 2;
};

/// Closed-form periodic initial data: the deformation gradient is the exact
/// analytic gradient of the displacement, so the involution holds pointwise
/// and xi = Phi(F) holds exactly at t = 0.
template <int D>
FrameFields<D> make_initial(const Grid<D>& g, const FreeEnergy<D>& law, const InitialParams& p);

/// Wave speed / diffusion estimates that back the two CFL constraints.
template <int D>
double estimate_dt(const Grid<D>& g, const FreeEnergy<D>& law, const RunParams<D>& rp,
                   const FrameFields<D>& state);

template <int D>
RunResult<D> run(const Grid<D>& g, const FreeEnergy<D>& law, const RunParams<D>& rp,
                 const FrameFields<D>& initial, double t_end);

/// Adiabatic run on a `factor` x finer grid with dt scaled down by the same
/// factor, restricted back onto the coarse grid; serves as the strong
/// reference solution in the limit experiments.
template <int D>
RunResult<D> reference_solution(const Grid<D>& coarse, const FreeEnergy<D>& law,
                                const RunParams<D>& rp_coarse, const InitialParams& init,
                                double t_end, int factor);

/// Pointwise restriction of every frame onto a coarse grid (cell centers of
/// the coarse grid are a subset of the fine ones).
template <int D>
Trajectory<D> restrict_trajectory(const Trajectory<D>& fine, const Grid<D>& coarse);

/// Entropy production integral at one frame (the dissipation ledger entry).
template <int D>
double entropy_production(const Grid<D>& g, const TransportCoeffs& coeffs,
                          const FrameFields<D>& state);

}  // namespace polytherm

#endif  // POLYTHERM_SOLVER_HPP
