/// @file identity.hpp
/// @brief Discrete evaluation of the relative-entropy identity between two
///        stored runs: every term is formed with the same centered stencils
///        the solver uses, time derivatives by centered frame differences,
///        and the residual LHS - RHS is reported per interior frame.
///
/// The three variants share one algebraic core; they differ in which
/// dissipation terms exist on each side (candidate viscous/conducting vs.
/// reference adiabatic or inviscid-conducting) and in which dissipation
/// ledgers are reported.

#ifndef POLYTHERM_IDENTITY_HPP
#define POLYTHERM_IDENTITY_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "polytherm/fields.hpp"
#include "polytherm/relentropy.hpp"

namespace polytherm {

enum class IdentityVariant { general, viscous_vs_adiabatic, viscous_vs_thermoelastic };

template <int D>
using HeatSupplyFn = std::function<double(const std::array<double, D>&, double)>;

template <int D>
struct IdentitySide {
    const Trajectory<D>* traj = nullptr;
    TransportCoeffs coeffs;
    HeatSupplyFn<D> heat_supply;  // r(x, t); empty means 0
};

struct IdentitySeries {
    std::vector<double> t;
    std::vector<double> residual_l1;
    std::vector<double> residual_linf;
    std::vector<double> i_integral;
    std::vector<double> diss_visc;
    std::vector<double> diss_heat;
};

namespace detail {

template <int D>
inline Mat<D> grad_velocity(const Grid<D>& g, const FrameFields<D>& f, std::int64_t c) {
    Mat<D> gv;
    for (int i = 0; i < D; ++i)
        for (int al = 0; al < D; ++al) gv(i, al) = central_diff(g, f.v(i), c, al);
    return gv;
}

template <int D>
inline Vec<D> grad_theta(const Grid<D>& g, const FrameFields<D>& f, std::int64_t c) {
    Vec<D> gt;
    for (int al = 0; al < D; ++al) gt[al] = central_diff(g, f.theta(), c, al);
    return gt;
}

}  // namespace detail

template <int D>
IdentitySeries identity_residual(const FreeEnergy<D>& law, const IdentitySide<D>& cand,
                                 const IdentitySide<D>& ref, IdentityVariant variant) {
    constexpr int kXi = Minors<D>::kDim;
    const Trajectory<D>& tu = *cand.traj;
    const Trajectory<D>& tb = *ref.traj;
    tu.require_matches(tb);
    if (tu.frames.size() < 3)
        throw std::invalid_argument("identity_residual: need at least 3 frames");
    if (variant == IdentityVariant::viscous_vs_adiabatic &&
        (ref.coeffs.mu0 != 0.0 || ref.coeffs.k0 != 0.0))
        throw std::invalid_argument("identity_residual: reference must be adiabatic");
    if (variant == IdentityVariant::viscous_vs_thermoelastic && ref.coeffs.mu0 != 0.0)
        throw std::invalid_argument("identity_residual: reference must have zero viscosity");

    const Grid<D>& g = tu.grid;
    const std::int64_t nc = g.cells();
    IdentitySeries out;

    Field i_prev(nc), i_next(nc), residual(nc);
    Field i_dens(nc), dv_dens(nc), dh_dens(nc);
    std::array<Field, D> bracket;
    for (auto& b : bracket) b.assign(nc, 0.0);
    std::vector<Field> sbar(kXi, Field(nc, 0.0));

    for (std::size_t m = 1; m + 1 < tu.frames.size(); ++m) {
        const double dt = 0.5 * (tu.times[m + 1] - tu.times[m - 1]);
        const double t_m = tu.times[m];
        const FrameFields<D>&u = tu.frames[m], &ub = tb.frames[m];

        // Pointwise relative-entropy density at the neighbor frames (for the
        // centered time derivative) and reference stress-derivative fields
        // (differentiated in space below).
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) {
            i_prev[c] = rel_entropy_density(law, tu.frames[m - 1].at(c), tb.frames[m - 1].at(c));
            i_next[c] = rel_entropy_density(law, tu.frames[m + 1].at(c), tb.frames[m + 1].at(c));
            const PointState<D> pb = ub.at(c);
            const MinorsVec<D> sb = law.dpsi_dxi(pb.xi, pb.theta);
            for (int b = 0; b < kXi; ++b) sbar[b][c] = sb[b];
        }

        // Flux bracket of the identity.
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) {
            const PointState<D> pu = u.at(c);
            const PointState<D> pb = ub.at(c);
            const Mat<D> fu = pu.xi.fmat();
            const MinorsVec<D> s = law.dpsi_dxi(pu.xi, pu.theta);
            const MinorsVec<D> sb = law.dpsi_dxi(pb.xi, pb.theta);
            MinorsVec<D> ds;
            for (int b = 0; b < kXi; ++b) ds[b] = s[b] - sb[b];
            const Mat<D> dsg = apply_dminors_t(fu, ds);

            const Mat<D> gvu = detail::grad_velocity(g, u, c);
            const Mat<D> gvb = detail::grad_velocity(g, ub, c);
            const Vec<D> gtu = detail::grad_theta(g, u, c);
            const Vec<D> gtb = detail::grad_theta(g, ub, c);
            const double mu_u = cand.coeffs.template mu<D>(pu.xi, pu.theta);
            const double k_u = cand.coeffs.template k<D>(pu.xi, pu.theta);
            const double mu_b = ref.coeffs.template mu<D>(pb.xi, pb.theta);
            const double k_b = ref.coeffs.template k<D>(pb.xi, pb.theta);

            for (int al = 0; al < D; ++al) {
                double br = 0.0;
                for (int i = 0; i < D; ++i) {
                    const double dv = pu.v[i] - pb.v[i];
                    br += dsg(i, al) * dv;
                    br += (mu_u * gvu(i, al) - mu_b * gvb(i, al)) * dv;
                }
                br += (pu.theta - pb.theta) *
                      (k_u * gtu[al] / pu.theta - k_b * gtb[al] / pb.theta);
                bracket[al][c] = br;
            }
        }

#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) {
            const PointState<D> pu = u.at(c);
            const PointState<D> pb = ub.at(c);
            const Mat<D> fu = pu.xi.fmat();
            const Mat<D> fb = pb.xi.fmat();

            // LHS: centered d/dt of I minus divergence of the bracket
            double lhs = (i_next[c] - i_prev[c]) / (2.0 * dt);
            for (int al = 0; al < D; ++al) lhs -= central_diff(g, bracket[al], c, al);

            // time derivatives of the reference fields
            const double dtheta_dt =
                (tb.frames[m + 1].theta()[c] - tb.frames[m - 1].theta()[c]) / (2.0 * dt);
            MinorsVec<D> dxi_dt;
            for (int b = 0; b < kXi; ++b)
                dxi_dt[b] = (tb.frames[m + 1].xi(b)[c] - tb.frames[m - 1].xi(b)[c]) / (2.0 * dt);

            double rhs = -dtheta_dt * rel_eta(law, pu.xi, pu.theta, pb.xi, pb.theta);
            const MinorsVec<D> srel = rel_stress_deriv(law, pu.xi, pu.theta, pb.xi, pb.theta);
            for (int b = 0; b < kXi; ++b) rhs += dxi_dt[b] * srel[b];

            // (D_a sbar_B)(g^B(F) - g^B(Fb))(v - vb) : contract through the
            // minors pull-back one referential direction at a time.
            for (int al = 0; al < D; ++al) {
                MinorsVec<D> dsb;
                for (int b = 0; b < kXi; ++b) dsb[b] = central_diff(g, sbar[b], c, al);
                const Mat<D> mg = apply_dminors_t(fu, dsb) - apply_dminors_t(fb, dsb);
                for (int i = 0; i < D; ++i) rhs += mg(i, al) * (pu.v[i] - pb.v[i]);
            }

            const MinorsVec<D> s = law.dpsi_dxi(pu.xi, pu.theta);
            const MinorsVec<D> sb = law.dpsi_dxi(pb.xi, pb.theta);
            MinorsVec<D> ds;
            for (int b = 0; b < kXi; ++b) ds[b] = s[b] - sb[b];
            const Mat<D> mgs = apply_dminors_t(fu, ds) - apply_dminors_t(fb, ds);
            const Mat<D> gvb = detail::grad_velocity(g, ub, c);
            rhs += ddot(gvb, mgs);

            // dissipation cross terms
            const Mat<D> gvu = detail::grad_velocity(g, u, c);
            const Vec<D> gtu = detail::grad_theta(g, u, c);
            const Vec<D> gtb = detail::grad_theta(g, ub, c);
            const double mu_u = cand.coeffs.template mu<D>(pu.xi, pu.theta);
            const double k_u = cand.coeffs.template k<D>(pu.xi, pu.theta);
            const double mu_b = ref.coeffs.template mu<D>(pb.xi, pb.theta);
            const double k_b = ref.coeffs.template k<D>(pb.xi, pb.theta);
            const double th = pu.theta, thb = pb.theta;

            for (int i = 0; i < D; ++i)
                for (int al = 0; al < D; ++al) {
                    const double zu = mu_u * gvu(i, al), zb = mu_b * gvb(i, al);
                    rhs -= th * thb * (gvu(i, al) / th - gvb(i, al) / thb) * (zu / th - zb / thb);
                }
            for (int al = 0; al < D; ++al) {
                const double qu = k_u * gtu[al], qb = k_b * gtb[al];
                rhs -= (thb * qu / th - th * qb / thb) * (gtu[al] / th - gtb[al] / thb);
            }

            if (cand.heat_supply || ref.heat_supply) {
                std::array<double, D> x;
                for (int a = 0; a < D; ++a) x[a] = g.coord(c, a);
                const double r_u = cand.heat_supply ? cand.heat_supply(x, t_m) : 0.0;
                const double r_b = ref.heat_supply ? ref.heat_supply(x, t_m) : 0.0;
                rhs += (th - thb) * (r_u / th - r_b / thb);
            }

            residual[c] = lhs - rhs;
            i_dens[c] = rel_entropy_density(law, pu, pb);
            dv_dens[c] = thb * mu_u * frobenius2(gvu) / th;
            if (variant == IdentityVariant::viscous_vs_thermoelastic) {
                double q2 = 0.0;
                for (int al = 0; al < D; ++al) {
                    const double d = gtb[al] / thb - gtu[al] / th;
                    q2 += d * d;
                }
                dh_dens[c] = thb * k_u * q2;
            } else {
                double q2 = 0.0;
                for (int al = 0; al < D; ++al) q2 += gtu[al] * gtu[al];
                dh_dens[c] = thb * k_u * q2 / (th * th);
            }
        }

        out.t.push_back(t_m);
        out.residual_l1.push_back(integrate(g, [&](std::int64_t c) { return std::abs(residual[c]); }));
        out.residual_linf.push_back(
            deterministic_max(nc, [&](std::int64_t c) { return std::abs(residual[c]); }));
        out.i_integral.push_back(integrate(g, [&](std::int64_t c) { return i_dens[c]; }));
        out.diss_visc.push_back(integrate(g, [&](std::int64_t c) { return dv_dens[c]; }));
        out.diss_heat.push_back(integrate(g, [&](std::int64_t c) { return dh_dens[c]; }));
    }
    return out;
}

}  // namespace polytherm

#endif  // POLYTHERM_IDENTITY_HPP
