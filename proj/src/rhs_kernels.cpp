/// @file rhs_kernels.cpp
/// @brief OpenMP kernel path of the semidiscrete operator: a pointwise pass
///        assembling fluxes, coefficients and recovered temperature, then a
///        stencil pass with disjoint writes. Deterministic for any thread
///        count (no reductions in the hot loops).

#include <atomic>
#include <cmath>

#include "polytherm/rhs.hpp"

namespace polytherm {

template <int D>
double recover_theta(const FreeEnergy<D>& law, const Minors<D>& xi, double e_internal,
                     double guess) {
    const double tol = 1e-13 * std::max(1.0, std::abs(e_internal));
    double lo = 1e-10;
    // e_hat is strictly increasing in theta; fail fast when the energy sits
    // below the minimal internal energy at this xi.
    if (e_hat(law, xi, lo) > e_internal + tol) return std::nan("");
    double hi = std::max(guess, 1.0);
    int expand = 0;
    while (e_hat(law, xi, hi) < e_internal && ++expand < 120) hi *= 2.0;
    if (expand >= 120) return std::nan("");

    double th = std::min(std::max(guess, lo), hi);
    for (int it = 0; it < 100; ++it) {
        const double r = e_hat(law, xi, th) - e_internal;
        if (std::abs(r) <= tol) return th;
        (r > 0.0 ? hi : lo) = th;
        const double slope = de_hat_dtheta(law, xi, th);
        double next = th - r / std::max(slope, 1e-300);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        th = next;
    }
    return std::abs(e_hat(law, xi, th) - e_internal) <= 10.0 * tol ? th : std::nan("");
}

namespace {

template <int D>
std::array<std::array<std::int64_t, 2>, D> cell_neighbors(const Grid<D>& g, std::int64_t c) {
    std::array<std::array<std::int64_t, 2>, D> nb;
    std::int64_t stride = 1;
    std::int64_t rem = c;
    for (int ax = 0; ax < D; ++ax) {
        const std::int64_t coord = rem % g.n;
        rem /= g.n;
        const std::int64_t up = (coord + 1 == g.n) ? c - coord * stride : c + stride;
        const std::int64_t dn = (coord == 0) ? c + (g.n - 1) * stride : c - stride;
        nb[ax] = {dn, up};
        stride *= g.n;
    }
    return nb;
}

}  // namespace

template <int D>
bool eval_rhs_parallel(const SemiDiscrete<D>& ops, const std::vector<Field>& a, double t,
                       std::vector<Field>& rhs, Field& theta_cache) {
    constexpr int kXi = Minors<D>::kDim;
    constexpr int kComps = state_dim<D>();
    const Grid<D>& g = ops.grid;
    const FreeEnergy<D>& law = *ops.law;
    const std::int64_t nc = g.cells();
    const bool viscous = ops.coeffs.mu0 > 0.0 || ops.coeffs.k0 > 0.0;
    const bool hyper = ops.hyperviscosity > 0.0 && !viscous;

    std::vector<Field> flux(static_cast<std::size_t>(D) * kComps);  // [al * kComps + comp]
    std::vector<Field> lap;                                         // hyperviscosity scratch
    Field mu_f, k_f;
    for (auto& f : flux) f.assign(nc, 0.0);
    mu_f.assign(nc, 0.0);
    k_f.assign(nc, 0.0);
    if (rhs.size() != static_cast<std::size_t>(kComps)) rhs.assign(kComps, Field());
    for (auto& f : rhs) f.assign(nc, 0.0);
    theta_cache.assign(nc, 0.0);

    std::atomic<bool> failed{false};

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        Minors<D> xi;
        for (int b = 0; b < kXi; ++b) xi[b] = a[b][c];
        Vec<D> v;
        double v2 = 0.0;
        for (int i = 0; i < D; ++i) {
            v[i] = a[kXi + i][c];
            v2 += v[i] * v[i];
        }
        const double e_int = a[kXi + D][c] - 0.5 * v2;
        const double th = recover_theta(law, xi, e_int, law.theta_guess(xi, e_int));
        if (std::isnan(th)) {
            failed.store(true, std::memory_order_relaxed);
            theta_cache[c] = 1.0;
            continue;
        }
        theta_cache[c] = th;

        const MinorsVec<D> s = law.dpsi_dxi(xi, th);
        const Mat<D> f = xi.fmat();
        const Mat<D> sigma = apply_dminors_t(f, s);
        for (int al = 0; al < D; ++al) {
            Mat<D> dir;
            for (int i = 0; i < D; ++i) dir(i, al) = v[i];
            const Minors<D> gv = apply_dminors(f, dir);
            double sv = 0.0;
            for (int i = 0; i < D; ++i) sv += sigma(i, al) * v[i];
            Field* fa = &flux[static_cast<std::size_t>(al) * kComps];
            for (int b = 0; b < kXi; ++b) fa[b][c] = -gv[b];
            for (int i = 0; i < D; ++i) fa[kXi + i][c] = -sigma(i, al);
            fa[kXi + D][c] = -sv;
        }
        if (viscous) {
            mu_f[c] = ops.coeffs.template mu<D>(xi, th);
            k_f[c] = ops.coeffs.template k<D>(xi, th);
        }
    }
    if (failed.load()) return false;

    if (hyper) {
        lap.resize(kComps);
        for (auto& f : lap) f.assign(nc, 0.0);
        const double inv_h2 = 1.0 / (g.h * g.h);
#pragma omp parallel for schedule(static)
        for (std::int64_t c = 0; c < nc; ++c) {
            const auto nb = cell_neighbors(g, c);
            for (int comp = 0; comp < kComps; ++comp) {
                double l = 0.0;
                for (int ax = 0; ax < D; ++ax)
                    l += a[comp][nb[ax][1]] - 2.0 * a[comp][c] + a[comp][nb[ax][0]];
                lap[comp][c] = l * inv_h2;
            }
        }
    }

    const double inv_2h = 1.0 / (2.0 * g.h);
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double eps_h3 = ops.hyperviscosity * g.h * g.h * g.h;
    const bool has_supply = static_cast<bool>(ops.heat_supply);

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < nc; ++c) {
        const auto nb = cell_neighbors(g, c);
        for (int comp = 0; comp < kComps; ++comp) {
            double div = 0.0;
            for (int ax = 0; ax < D; ++ax) {
                const Field& fa = flux[static_cast<std::size_t>(ax) * kComps + comp];
                div += fa[nb[ax][1]] - fa[nb[ax][0]];
            }
            rhs[comp][c] = -div * inv_2h;
        }
        if (viscous) {
            // conservative-form mu grad v (momentum), mu v . grad v and
            // k grad theta (energy), with arithmetic face averages
            for (int ax = 0; ax < D; ++ax) {
                const std::int64_t cu = nb[ax][1], cd = nb[ax][0];
                const double mu_up = 0.5 * (mu_f[c] + mu_f[cu]);
                const double mu_dn = 0.5 * (mu_f[c] + mu_f[cd]);
                const double k_up = 0.5 * (k_f[c] + k_f[cu]);
                const double k_dn = 0.5 * (k_f[c] + k_f[cd]);
                for (int i = 0; i < D; ++i) {
                    const Field& vi = a[kXi + i];
                    const double jump_up = vi[cu] - vi[c];
                    const double jump_dn = vi[c] - vi[cd];
                    rhs[kXi + i][c] += (mu_up * jump_up - mu_dn * jump_dn) * inv_h2;
                    const double vbar_up = 0.5 * (vi[cu] + vi[c]);
                    const double vbar_dn = 0.5 * (vi[c] + vi[cd]);
                    rhs[kXi + D][c] +=
                        (mu_up * vbar_up * jump_up - mu_dn * vbar_dn * jump_dn) * inv_h2;
                }
                rhs[kXi + D][c] += (k_up * (theta_cache[cu] - theta_cache[c]) -
                                    k_dn * (theta_cache[c] - theta_cache[cd])) *
                                   inv_h2;
            }
        }
        if (hyper) {
            for (int comp = 0; comp < kComps; ++comp) {
                double l = 0.0;
                for (int ax = 0; ax < D; ++ax)
                    l += lap[comp][nb[ax][1]] - 2.0 * lap[comp][c] + lap[comp][nb[ax][0]];
                rhs[comp][c] -= eps_h3 * l * inv_h2;
            }
        }
        if (has_supply) {
            std::array<double, D> x;
            for (int ax = 0; ax < D; ++ax) x[ax] = g.coord(c, ax);
            rhs[kXi + D][c] += ops.heat_supply(x, t);
        }
    }
    return true;
}

template double recover_theta<2>(const FreeEnergy<2>&, const Minors<2>&, double, double);
template double recover_theta<3>(const FreeEnergy<3>&, const Minors<3>&, double, double);
template bool eval_rhs_parallel<2>(const SemiDiscrete<2>&, const std::vector<Field>&, double,
                                   std::vector<Field>&, Field&);
template bool eval_rhs_parallel<3>(const SemiDiscrete<3>&, const std::vector<Field>&, double,
                                   std::vector<Field>&, Field&);

}  // namespace polytherm
