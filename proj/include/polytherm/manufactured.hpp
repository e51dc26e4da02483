/// @file manufactured.hpp
/// @brief Closed-form solutions used as oracles: an exact traveling shear
///        wave of the 2-d quadratic family (any amplitude), and a forced
///        thermal relaxation with an analytic heat supply. Test/verification
///        support; the solver never sees these.

#ifndef POLYTHERM_MANUFACTURED_HPP
#define POLYTHERM_MANUFACTURED_HPP

#include <cmath>

#include "polytherm/fields.hpp"
#include "polytherm/law.hpp"

namespace polytherm {

/// Traveling shear y1 = x1 + A sin(k (x2 - c t)), y2 = x2, theta = theta0 with
/// c^2 = alpha. For the built-in quadratic 2-d law (any gamma, kappa = 0) this
/// satisfies the adiabatic system exactly: det F = 1 along the motion, the
/// volumetric stress coefficient vanishes at the calibrated reference, and the
/// shear component obeys the linear wave equation.
struct ShearWave {
    double amplitude = 0.05;
    int mode = 1;
    double alpha = 1.0;
    double theta0 = 1.0;
    double phase = 0.0;

    double wavenumber(double length) const { return 2.0 * M_PI * mode / length; }

    FrameFields<2> frame(const Grid<2>& g, double t) const {
        FrameFields<2> out(g);
        const double k = wavenumber(g.length);
        const double c = std::sqrt(alpha);
        const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
        for (std::int64_t cell = 0; cell < nc; ++cell) {
            const double x1 = g.coord(cell, 1);
            const double arg = k * (x1 - c * t) + phase;
            Mat<2> f = Mat<2>::identity();
            f(0, 1) = amplitude * k * std::cos(arg);
            PointState<2> u;
            u.xi = minors_of(f);
            u.v[0] = -amplitude * k * c * std::cos(arg);
            u.theta = theta0;
            out.set(cell, u);
        }
        return out;
    }

    Trajectory<2> trajectory(const Grid<2>& g, const std::vector<double>& times) const {
        Trajectory<2> traj;
        traj.grid = g;
        traj.times = times;
        for (double t : times) traj.frames.push_back(frame(g, t));
        return traj;
    }
};

/// Forced thermal relaxation against a resting body: y = x, v = 0,
/// theta(x, t) = theta0 + a e^{-lambda t} prod_i cos(2 pi m x_i / L), with the
/// heat supply r = e_theta dtheta/dt - k0 lap(theta) chosen so the viscous
/// system with constant conduction k0 is satisfied exactly. Requires an
/// uncoupled law (gamma = 0), which keeps the stress field identically zero.
template <int D>
struct ThermalRelaxation {
    double theta0 = 1.0;
    double amp = 0.1;
    int mode = 1;
    double decay = 0.5;
    double k0 = 1e-2;
    double c_v = 1.0;  // quadratic thermal factor: e_theta = c_v theta

    double profile(const std::array<double, D>& x, double length) const {
        const double k = 2.0 * M_PI * mode / length;
        double p = 1.0;
        for (int ax = 0; ax < D; ++ax) p *= std::cos(k * x[ax]);
        return p;
    }

    double theta(const std::array<double, D>& x, double t, double length) const {
        return theta0 + amp * std::exp(-decay * t) * profile(x, length);
    }

    /// heat supply making theta(x,t) exact for the resting body
    double supply(const std::array<double, D>& x, double t, double length) const {
        const double k = 2.0 * M_PI * mode / length;
        const double e = amp * std::exp(-decay * t) * profile(x, length);
        const double th = theta0 + e;
        const double dtheta_dt = -decay * e;
        const double lap = -static_cast<double>(D) * k * k * e;
        return c_v * th * dtheta_dt - k0 * lap;
    }

    FrameFields<D> frame(const Grid<D>& g, double t) const {
        FrameFields<D> out(g);
        const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
        for (std::int64_t cell = 0; cell < nc; ++cell) {
            std::array<double, D> x;
            for (int ax = 0; ax < D; ++ax) x[ax] = g.coord(cell, ax);
            PointState<D> u;
            u.xi = minors_of(Mat<D>::identity());
            u.theta = theta(x, t, g.length);
            out.set(cell, u);
        }
        return out;
    }
};

/// Max-norm difference between two frames, componentwise over the primitive fields.
template <int D>
inline double frame_distance(const FrameFields<D>& a, const FrameFields<D>& b) {
    double worst = 0.0;
    for (int comp = 0; comp < FrameFields<D>::kComps; ++comp)
        for (std::size_t c = 0; c < a.c[comp].size(); ++c)
            worst = std::max(worst, std::abs(a.c[comp][c] - b.c[comp][c]));
    return worst;
}

}  // namespace polytherm

#endif  // POLYTHERM_MANUFACTURED_HPP
