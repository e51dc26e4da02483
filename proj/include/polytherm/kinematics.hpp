/// @file kinematics.hpp
/// @brief Discrete verification of the null-Lagrangian structure: the
///        Euler-Lagrange divergence identity, the Piola identity, and the
///        minors transport identity, all on the periodic torus with
///        second-order central differences.

#ifndef POLYTHERM_KINEMATICS_HPP
#define POLYTHERM_KINEMATICS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polytherm/grid.hpp"
#include "polytherm/tensor.hpp"

namespace polytherm {

template <int D>
using MatField = std::array<Field, D * D>;  // one Field per (i,alpha)

template <int D>
using VecField = std::array<Field, D>;

template <int D>
inline Mat<D> mat_at(const MatField<D>& f, std::int64_t c) {
    Mat<D> m;
    for (int k = 0; k < D * D; ++k) m.a[k] = f[k][c];
    return m;
}

/// F = I + grad(u) with the displacement differentiated by central differences.
template <int D>
MatField<D> deformation_gradient(const Grid<D>& g, const VecField<D>& u) {
    MatField<D> f;
    for (auto& comp : f) comp.assign(g.cells(), 0.0);
    const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        for (int i = 0; i < D; ++i)
            for (int al = 0; al < D; ++al)
                f[i * D + al][c] = (i == al ? 1.0 : 0.0) + central_diff(g, u[i], c, al);
    }
    return f;
}

/// Max-norm of the discrete curl, (D_a F_{ib} - D_b F_{ia}) over all i, a<b.
/// Zero (to truncation order) exactly when F is a discrete gradient.
template <int D>
double curl_residual(const Grid<D>& g, const MatField<D>& f) {
    return deterministic_max(g.cells(), [&](std::int64_t c) {
        double m = 0.0;
        for (int i = 0; i < D; ++i)
            for (int al = 0; al < D; ++al)
                for (int be = al + 1; be < D; ++be) {
                    const double r = central_diff(g, f[i * D + be], c, al) -
                                     central_diff(g, f[i * D + al], c, be);
                    m = std::max(m, std::abs(r));
                }
        return m;
    });
}

/// Max-norm of D_a (dPhi^B/dF_{ia}(F)) over all minors slots B and rows i.
/// Vanishes identically in the continuum for any gradient field; the discrete
/// version decays at second order under mesh refinement.
template <int D>
double null_lagrangian_residual(const Grid<D>& g, const MatField<D>& f) {
    constexpr int kXi = Minors<D>::kDim;
    // Per-cell Jacobian columns g^B_{ia}(F), stored as (ia) fields of minors
    // vectors flattened to [B * D*D + ia].
    std::vector<Field> jac(static_cast<std::size_t>(kXi * D * D));
    for (auto& comp : jac) comp.assign(g.cells(), 0.0);
    const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const auto cols = dminors_columns(mat_at(f, c));
        for (int ia = 0; ia < D * D; ++ia)
            for (int b = 0; b < kXi; ++b) jac[b * D * D + ia][c] = cols[ia][b];
    }
    return deterministic_max(nc, [&](std::int64_t c) {
        double m = 0.0;
        for (int b = 0; b < kXi; ++b)
            for (int i = 0; i < D; ++i) {
                double div = 0.0;
                for (int al = 0; al < D; ++al)
                    div += central_diff(g, jac[b * D * D + i * D + al], c, al);
                m = std::max(m, std::abs(div));
            }
        return m;
    });
}

template <int D>
double null_lagrangian_residual(const Grid<D>& g, const VecField<D>& displacement) {
    return null_lagrangian_residual(g, deformation_gradient(g, displacement));
}

/// Piola identity residual: the determinant-slot row of the Euler-Lagrange
/// check, D_a (cof F)_{ia}.
template <int D>
double piola_residual(const Grid<D>& g, const MatField<D>& f) {
    MatField<D> cof;
    for (auto& comp : cof) comp.assign(g.cells(), 0.0);
    const std::int64_t nc = g.cells();
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const Mat<D> cf = cofactor(mat_at(f, c));
        for (int k = 0; k < D * D; ++k) cof[k][c] = cf.a[k];
    }
    return deterministic_max(nc, [&](std::int64_t c) {
        double m = 0.0;
        for (int i = 0; i < D; ++i) {
            double div = 0.0;
            for (int al = 0; al < D; ++al) div += central_diff(g, cof[i * D + al], c, al);
            m = std::max(m, std::abs(div));
        }
        return m;
    });
}

/// One time frame of a discrete motion: deformation gradient and velocity.
template <int D>
struct MotionFrame {
    MatField<D> f;
    VecField<D> v;
};

/// Residual of the minors transport identity
///   d/dt Phi^B(F) - D_a (dPhi^B/dF_{ia}(F) v_i)
/// evaluated with centered differences in time and space over the interior
/// frames. Inputs must be gradients; a curl check rejects fields whose
/// discrete curl exceeds `curl_tol`.
template <int D>
double transport_residual(const Grid<D>& g, const std::vector<MotionFrame<D>>& frames,
                          double dt, double curl_tol = 1.0) {
    if (frames.size() < 3) throw std::invalid_argument("transport_residual: need >= 3 frames");
    for (const auto& fr : frames)
        if (curl_residual(g, fr.f) > curl_tol)
            throw std::invalid_argument("transport_residual: F input is not a discrete gradient");

    constexpr int kXi = Minors<D>::kDim;
    const std::int64_t nc = g.cells();
    double worst = 0.0;
    std::vector<Field> flux(static_cast<std::size_t>(kXi * D));
    Field phi_prev(nc), phi_next(nc);
    for (std::size_t m = 1; m + 1 < frames.size(); ++m) {
        for (auto& comp : flux) comp.assign(nc, 0.0);
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) {
            const Mat<D> fc = mat_at(frames[m].f, c);
            Vec<D> vc;
            for (int i = 0; i < D; ++i) vc[i] = frames[m].v[i][c];
            for (int al = 0; al < D; ++al) {
                Mat<D> dir;  // dir_{ib} = v_i delta_{b,al}
                for (int i = 0; i < D; ++i) dir(i, al) = vc[i];
                const Minors<D> gv = apply_dminors(fc, dir);
                for (int b = 0; b < kXi; ++b) flux[b * D + al][c] = gv[b];
            }
        }
        for (int b = 0; b < kXi; ++b) {
#pragma omp parallel for schedule(static)
            for (std::int64_t c = 0; c < nc; ++c) {
                phi_prev[c] = minors_of(mat_at(frames[m - 1].f, c))[b];
                phi_next[c] = minors_of(mat_at(frames[m + 1].f, c))[b];
            }
            const double r = deterministic_max(nc, [&](std::int64_t c) {
                double div = 0.0;
                for (int al = 0; al < D; ++al)
                    div += central_diff(g, flux[b * D + al], c, al);
                return std::abs((phi_next[c] - phi_prev[c]) / (2.0 * dt) - div);
            });
            worst = std::max(worst, r);
        }
    }
    return worst;
}

}  // namespace polytherm

#endif  // POLYTHERM_KINEMATICS_HPP
