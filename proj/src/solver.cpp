/// @file solver.cpp
/// @brief RK4 stepper, initial data, CFL estimation, diagnostics, and the
///        fine-grid reference solution with restriction.

#include "polytherm/solver.hpp"

#include <atomic>
#include <cmath>

#include "polytherm/kinematics.hpp"

namespace polytherm {

namespace {

template <int D>
std::vector<Field> conserved_from_primitive(const Grid<D>& g, const FreeEnergy<D>& law,
                                            const FrameFields<D>& prim) {
    constexpr int kXi = Minors<D>::kDim;
    constexpr int kComps = state_dim<D>();
    std::vector<Field> a(kComps, Field(g.cells(), 0.0));
    const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const PointState<D> u = prim.at(c);
        for (int b = 0; b < kXi; ++b) a[b][c] = u.xi[b];
        double v2 = 0.0;
        for (int i = 0; i < D; ++i) {
            a[kXi + i][c] = u.v[i];
            v2 += u.v[i] * u.v[i];
        }
        a[kXi + D][c] = 0.5 * v2 + e_hat(law, u.xi, u.theta);
    }
    return a;
}

template <int D>
FrameFields<D> primitive_from_conserved(const Grid<D>& g, const std::vector<Field>& a,
                                        const Field& theta) {
    constexpr int kXi = Minors<D>::kDim;
    FrameFields<D> prim(g);
    for (int b = 0; b < kXi; ++b) prim.xi(b) = a[b];
    for (int i = 0; i < D; ++i) prim.v(i) = a[kXi + i];
    prim.theta() = theta;
    return prim;
}

template <int D>
bool recover_theta_field(const Grid<D>& g, const FreeEnergy<D>& law, const std::vector<Field>& a,
                         Field& theta) {
    constexpr int kXi = Minors<D>::kDim;
    const std::int64_t nc = g.cells();
    theta.assign(nc, 0.0);
    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        Minors<D> xi;
        for (int b = 0; b < kXi; ++b) xi[b] = a[b][c];
        double v2 = 0.0;
        for (int i = 0; i < D; ++i) v2 += a[kXi + i][c] * a[kXi + i][c];
        const double e_int = a[kXi + D][c] - 0.5 * v2;
        const double th = recover_theta(law, xi, e_int, law.theta_guess(xi, e_int));
        if (std::isnan(th)) failed.store(true, std::memory_order_relaxed);
        theta[c] = th;
    }
    return !failed.load();
}

/// max over cells and components of |centered gradient| of the primitive fields
template <int D>
double gradient_norm(const Grid<D>& g, const FrameFields<D>& prim) {
    constexpr int kComps = state_dim<D>();
    return deterministic_max(g.cells(), [&](std::int64_t c) {
        double m = 0.0;
        for (int comp = 0; comp < kComps; ++comp)
            for (int ax = 0; ax < D; ++ax)
                m = std::max(m, std::abs(central_diff(g, prim.c[comp], c, ax)));
        return m;
    });
}

template <int D>
DiagnosticsFrame diagnostics_at(const Grid<D>& g, const FreeEnergy<D>& law,
                                const TransportCoeffs& coeffs, const std::vector<Field>& a,
                                const FrameFields<D>& prim, double t, double dt,
                                double prod_cum) {
    constexpr int kXi = Minors<D>::kDim;
    (void)coeffs;
    DiagnosticsFrame f;
    f.t = t;
    f.dt = dt;
    f.energy_total = integrate(g, [&](std::int64_t c) { return a[kXi + D][c]; });
    f.entropy_total = integrate(g, [&](std::int64_t c) {
        const PointState<D> u = prim.at(c);
        return eta_hat(law, u.xi, u.theta);
    });
    f.entropy_production_cum = prod_cum;
    f.constraint_drift = deterministic_max(g.cells(), [&](std::int64_t c) {
        const PointState<D> u = prim.at(c);
        const Minors<D> phi = minors_of(u.xi.fmat());
        double m = 0.0;
        for (int b = 0; b < kXi; ++b) m = std::max(m, std::abs(u.xi[b] - phi[b]));
        return m;
    });
    MatField<D> fmat;
    for (int k = 0; k < D * D; ++k) fmat[k] = prim.xi(k);
    f.involution_drift = curl_residual(g, fmat);
    f.theta_min = -deterministic_max(g.cells(), [&](std::int64_t c) { return -prim.theta()[c]; });
    return f;
}

template <int D>
void axpy_state(std::vector<Field>& y, double s, const std::vector<Field>& x) {
    const std::int64_t nc = y[0].size();
    for (std::size_t comp = 0; comp < y.size(); ++comp) {
        double* yp = y[comp].data();
        const double* xp = x[comp].data();
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) yp[c] += s * xp[c];
    }
}

template <int D>
void copy_axpy_state(std::vector<Field>& out, const std::vector<Field>& base, double s,
                     const std::vector<Field>& x) {
    const std::int64_t nc = base[0].size();
    for (std::size_t comp = 0; comp < base.size(); ++comp) {
        double* op = out[comp].data();
        const double* bp = base[comp].data();
        const double* xp = x[comp].data();
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) op[c] = bp[c] + s * xp[c];
    }
}

}  // namespace

template <int D>
double entropy_production(const Grid<D>& g, const TransportCoeffs& coeffs,
                          const FrameFields<D>& state) {
    if (coeffs.mu0 <= 0.0 && coeffs.k0 <= 0.0) return 0.0;
    return integrate(g, [&](std::int64_t c) {
        const PointState<D> u = state.at(c);
        const double mu = coeffs.template mu<D>(u.xi, u.theta);
        const double k = coeffs.template k<D>(u.xi, u.theta);
        double gv2 = 0.0, gt2 = 0.0;
        for (int i = 0; i < D; ++i)
            for (int ax = 0; ax < D; ++ax) {
                const double d = central_diff(g, state.v(i), c, ax);
                gv2 += d * d;
            }
        for (int ax = 0; ax < D; ++ax) {
            const double d = central_diff(g, state.theta(), c, ax);
            gt2 += d * d;
        }
        return k * gt2 / (u.theta * u.theta) + mu * gv2 / u.theta;
    });
}

template <int D>
double estimate_dt(const Grid<D>& g, const FreeEnergy<D>& law, const RunParams<D>& rp,
                   const FrameFields<D>& state) {
    const std::int64_t nc = g.cells();
    const double lambda_max = deterministic_max(nc, [&](std::int64_t c) {
        const PointState<D> u = state.at(c);
        double v2 = 0.0;
        for (int i = 0; i < D; ++i) v2 += u.v[i] * u.v[i];
        const MinorsMat<D> h = law.d2psi_dxi2(u.xi, u.theta);
        double hn = 0.0;
        for (double x : h) hn += x * x;
        double gn = 0.0;
        for (const auto& col : dminors_columns(u.xi.fmat()))
            for (double x : col) gn += x * x;
        return std::sqrt(v2) + std::sqrt(gn) * std::sqrt(std::sqrt(hn));
    });
    double dt = rp.cfl_hyperbolic * g.h / std::max(lambda_max, 1e-12);
    if (rp.coeffs.mu0 > 0.0 || rp.coeffs.k0 > 0.0) {
        const double nu_max = deterministic_max(nc, [&](std::int64_t c) {
            const PointState<D> u = state.at(c);
            const double mu = rp.coeffs.template mu<D>(u.xi, u.theta);
            const double k = rp.coeffs.template k<D>(u.xi, u.theta);
            const double cap = de_hat_dtheta(law, u.xi, u.theta);
            return std::max(mu, k / std::max(cap, 1e-8));
        });
        dt = std::min(dt, rp.cfl_parabolic * g.h * g.h / std::max(nu_max, 1e-12));
    }
    return dt;
}

template <int D>
FrameFields<D> make_initial(const Grid<D>& g, const FreeEnergy<D>& law, const InitialParams& p) {
    FrameFields<D> prim(g);
    const double kx = 2.0 * M_PI * p.mode / g.length;
    const double kv = 2.0 * M_PI * p.v_mode / g.length;
    if (p.theta0 - std::abs(p.theta_amplitude) <= 0.0)
        throw std::invalid_argument("make_initial: temperature must stay positive");

    // shear wave speed of the built-in family, used to seed a traveling wave
    double wave_speed = 1.0;
    if (const auto* poly = dynamic_cast<const PolyconvexLaw<D>*>(&law))
        wave_speed = std::sqrt(std::max(poly->params().alpha, 1e-12));

    const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        std::array<double, D> x;
        for (int ax = 0; ax < D; ++ax) x[ax] = g.coord(c, ax);
        Mat<D> f = Mat<D>::identity();
        Vec<D> v{};
        double theta = p.theta0;
        switch (p.kind) {
            case InitialKind::rest:
                break;
            case InitialKind::sine_shear:
                // y1 = x1 + A sin(k x2): an exact traveling profile of the
                // quadratic 2-d family when paired with v1 = -A k c cos(k x2)
                f(0, 1) += p.amplitude * kx * std::cos(kx * x[1]);
                v[0] = -p.amplitude * kx * wave_speed * std::cos(kx * x[1]);
                break;
            case InitialKind::thermal_bump: {
                double bump = std::cos(kx * x[0]);
                for (int ax = 1; ax < D; ++ax) bump *= std::cos(kx * x[ax]);
                theta += (p.theta_amplitude != 0.0 ? p.theta_amplitude : p.amplitude) * bump;
                break;
            }
            case InitialKind::gradient_perturbation:
                // y1 = x1 + A sin(k x2), y2 = x2 + A sin(k x1); analytic gradient
                f(0, 1) += p.amplitude * kx * std::cos(kx * x[1]);
                f(1, 0) += p.amplitude * kx * std::cos(kx * x[0]);
                theta += p.theta_amplitude * std::cos(kx * x[0]);
                break;
        }
        if (p.v_perturb != 0.0) v[D - 1] += p.v_perturb * std::sin(kv * x[0]);
        PointState<D> u;
        u.xi = minors_of(f);
        u.v = v;
        u.theta = theta;
        prim.set(c, u);
    }
    return prim;
}

template <int D>
RunResult<D> run(const Grid<D>& g, const FreeEnergy<D>& law, const RunParams<D>& rp,
                 const FrameFields<D>& initial, double t_end) {
    constexpr int kComps = state_dim<D>();
    RunResult<D> res;
    res.traj.grid = g;

    SemiDiscrete<D> ops;
    ops.grid = g;
    ops.law = &law;
    ops.coeffs = rp.coeffs;
    ops.hyperviscosity = (rp.coeffs.mu0 <= 0.0 && rp.coeffs.k0 <= 0.0) ? rp.hyperviscosity : 0.0;
    ops.heat_supply = rp.heat_supply;
    const bool viscous = rp.coeffs.mu0 > 0.0 || rp.coeffs.k0 > 0.0;

    auto eval = [&](const std::vector<Field>& a, double t, std::vector<Field>& rhs,
                    Field& theta) {
        return rp.exec == ExecPolicy::parallel ? eval_rhs_parallel(ops, a, t, rhs, theta)
                                               : eval_rhs_reference(ops, a, t, rhs, theta);
    };

    std::vector<Field> a = conserved_from_primitive(g, law, initial);
    std::vector<Field> stage(kComps), rhs(kComps), acc(kComps);
    for (auto& f : stage) f.assign(g.cells(), 0.0);
    for (auto& f : acc) f.assign(g.cells(), 0.0);
    Field theta(g.cells(), 0.0);

    double t = 0.0;
    double prod_cum = 0.0;
    double prod_prev = viscous ? entropy_production(g, rp.coeffs, initial) : 0.0;
    double grad0 = -1.0;

    auto emit_frame = [&](double dt_used) -> bool {
        if (!recover_theta_field(g, law, a, theta)) {
            res.aborted = true;
            res.abort_reason = "theta recovery failed at frame";
            return false;
        }
        FrameFields<D> prim = primitive_from_conserved<D>(g, a, theta);
        res.traj.times.push_back(t);
        res.traj.frames.push_back(prim);
        res.diagnostics.push_back(
            diagnostics_at(g, law, rp.coeffs, a, prim, t, dt_used, prod_cum));
        const double gn = gradient_norm(g, prim);
        if (grad0 < 0.0) grad0 = gn;
        if (gn > rp.smoothness_abort_factor * std::max(grad0, 1e-12)) {
            res.aborted = true;
            res.abort_reason = "smoothness monitor tripped (gradient growth)";
            return false;
        }
        if (rp.theta_floor > 0.0 && res.diagnostics.back().theta_min < rp.theta_floor) {
            res.aborted = true;
            res.abort_reason = "temperature fell below the configured floor";
            return false;
        }
        return true;
    };

    if (!emit_frame(0.0)) return res;

    int step_in_frame = 0;
    while (t < t_end - 1e-12 * std::max(1.0, t_end)) {
        double dt = rp.fixed_dt;
        if (rp.fixed_dt <= 0.0 || step_in_frame == 0) {
            if (!recover_theta_field(g, law, a, theta)) goto recovery_abort;
            const double lim = estimate_dt(g, law, rp, primitive_from_conserved<D>(g, a, theta));
            if (rp.fixed_dt > 0.0 && rp.fixed_dt > 1.25 * lim) {
                res.aborted = true;
                res.abort_reason = "fixed dt violates the CFL constraints";
                return res;
            }
            if (rp.fixed_dt <= 0.0) dt = lim;
        }
        dt = std::min(dt, t_end - t);

        // classical RK4
        if (!eval(a, t, rhs, theta)) goto recovery_abort;
        for (int comp = 0; comp < kComps; ++comp) acc[comp] = a[comp];
        axpy_state<D>(acc, dt / 6.0, rhs);
        copy_axpy_state<D>(stage, a, 0.5 * dt, rhs);
        if (!eval(stage, t + 0.5 * dt, rhs, theta)) goto recovery_abort;
        axpy_state<D>(acc, dt / 3.0, rhs);
        copy_axpy_state<D>(stage, a, 0.5 * dt, rhs);
        if (!eval(stage, t + 0.5 * dt, rhs, theta)) goto recovery_abort;
        axpy_state<D>(acc, dt / 3.0, rhs);
        copy_axpy_state<D>(stage, a, dt, rhs);
        if (!eval(stage, t + dt, rhs, theta)) goto recovery_abort;
        axpy_state<D>(acc, dt / 6.0, rhs);
        std::swap(a, acc);

        t += dt;
        ++res.steps;
        ++step_in_frame;

        if (viscous) {
            if (!recover_theta_field(g, law, a, theta)) goto recovery_abort;
            const double prod_now =
                entropy_production(g, rp.coeffs, primitive_from_conserved<D>(g, a, theta));
            prod_cum += 0.5 * dt * (prod_prev + prod_now);
            prod_prev = prod_now;
        }

        if (step_in_frame == rp.frame_stride || t >= t_end - 1e-12 * std::max(1.0, t_end)) {
            step_in_frame = 0;
            if (!emit_frame(dt)) return res;
        }
    }
    return res;

recovery_abort:
    res.aborted = true;
    res.abort_reason = "theta recovery failed (energy below admissible range)";
    return res;
}

template <int D>
Trajectory<D> restrict_trajectory(const Trajectory<D>& fine, const Grid<D>& coarse) {
    const int factor = fine.grid.n / coarse.n;
    if (factor * coarse.n != fine.grid.n || fine.grid.length != coarse.length)
        throw std::invalid_argument("restrict_trajectory: grids are not nested");
    Trajectory<D> out;
    out.grid = coarse;
    out.times = fine.times;
    for (const auto& frame : fine.frames) {
        FrameFields<D> cf(coarse);
        const std::int64_t ncc = coarse.cells();
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < ncc; ++c) {
            // map coarse (i,j,..) to fine (factor*i, factor*j, ..)
            std::int64_t fidx = 0;
            std::int64_t rem = c, fstride = 1;
            for (int ax = 0; ax < D; ++ax) {
                const std::int64_t coord = rem % coarse.n;
                rem /= coarse.n;
                fidx += coord * factor * fstride;
                fstride *= fine.grid.n;
            }
            for (int comp = 0; comp < state_dim<D>(); ++comp)
                cf.c[comp][c] = frame.c[comp][fidx];
        }
        out.frames.push_back(std::move(cf));
    }
    return out;
}

template <int D>
RunResult<D> reference_solution(const Grid<D>& coarse, const FreeEnergy<D>& law,
                                const RunParams<D>& rp_coarse, const InitialParams& init,
                                double t_end, int factor) {
    if (factor < 1) throw std::invalid_argument("reference_solution: factor must be >= 1");
    if (rp_coarse.fixed_dt <= 0.0)
        throw std::invalid_argument("reference_solution: a fixed dt is required for alignment");
    Grid<D> fine(coarse.n * factor, coarse.length);
    RunParams<D> rp = rp_coarse;
    rp.coeffs.mu0 = 0.0;
    rp.coeffs.k0 = 0.0;
    rp.fixed_dt = rp_coarse.fixed_dt / factor;
    rp.frame_stride = rp_coarse.frame_stride * factor;
    RunResult<D> res = run(fine, law, rp, make_initial(fine, law, init), t_end);
    if (!res.aborted) res.traj = restrict_trajectory(res.traj, coarse);
    return res;
}

#define POLYTHERM_INSTANTIATE(D)                                                              \
    template double entropy_production<D>(const Grid<D>&, const TransportCoeffs&,             \
                                          const FrameFields<D>&);                             \
    template double estimate_dt<D>(const Grid<D>&, const FreeEnergy<D>&, const RunParams<D>&, \
                                   const FrameFields<D>&);                                    \
    template FrameFields<D> make_initial<D>(const Grid<D>&, const FreeEnergy<D>&,             \
                                            const InitialParams&);                            \
    template RunResult<D> run<D>(const Grid<D>&, const FreeEnergy<D>&, const RunParams<D>&,   \
                                 const FrameFields<D>&, double);                              \
    template Trajectory<D> restrict_trajectory<D>(const Trajectory<D>&, const Grid<D>&);      \
    template RunResult<D> reference_solution<D>(const Grid<D>&, const FreeEnergy<D>&,         \
                                                const RunParams<D>&, const InitialParams&,    \
                                                double, int);

POLYTHERM_INSTANTIATE(2)
POLYTHERM_INSTANTIATE(3)

#undef POLYTHERM_INSTANTIATE

}  // namespace polytherm
