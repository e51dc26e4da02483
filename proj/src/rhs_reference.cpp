/// @file rhs_reference.cpp
/// @brief Serial reference path of the semidiscrete operator. Evaluates the
///        pointwise augmented assembly at each cell and its neighbors with no
///        caching, fusion, or threading; kept as an independent route the
///        kernel path is tested and benchmarked against.

#include <cmath>

#include "polytherm/rhs.hpp"

namespace polytherm {

namespace {

template <int D>
PointState<D> state_at(const FreeEnergy<D>& law, const std::vector<Field>& a, std::int64_t c,
                       bool* ok) {
    constexpr int kXi = Minors<D>::kDim;
    PointState<D> u;
    for (int b = 0; b < kXi; ++b) u.xi[b] = a[b][c];
    double v2 = 0.0;
    for (int i = 0; i < D; ++i) {
        u.v[i] = a[kXi + i][c];
        v2 += u.v[i] * u.v[i];
    }
    const double e_int = a[kXi + D][c] - 0.5 * v2;
    u.theta = recover_theta(law, u.xi, e_int, law.theta_guess(u.xi, e_int));
    if (std::isnan(u.theta)) {
        *ok = false;
        u.theta = 1.0;
    }
    return u;
}

}  // namespace

template <int D>
bool eval_rhs_reference(const SemiDiscrete<D>& ops, const std::vector<Field>& a, double t,
                        std::vector<Field>& rhs, Field& theta_cache) {
    constexpr int kXi = Minors<D>::kDim;
    constexpr int kComps = state_dim<D>();
    const Grid<D>& g = ops.grid;
    const FreeEnergy<D>& law = *ops.law;
    const std::int64_t nc = g.cells();
    const bool viscous = ops.coeffs.mu0 > 0.0 || ops.coeffs.k0 > 0.0;
    const bool hyper = ops.hyperviscosity > 0.0 && !viscous;

    if (rhs.size() != static_cast<std::size_t>(kComps)) rhs.assign(kComps, Field());
    for (auto& f : rhs) f.assign(nc, 0.0);
    theta_cache.assign(nc, 0.0);

    bool ok = true;
    for (std::int64_t c = 0; c < nc; ++c)
        theta_cache[c] = state_at(law, a, c, &ok).theta;
    if (!ok) return false;

    std::vector<Field> lap;
    if (hyper) {
        lap.assign(kComps, Field(nc, 0.0));
        for (int comp = 0; comp < kComps; ++comp)
            for (std::int64_t c = 0; c < nc; ++c) {
                double l = 0.0;
                for (int ax = 0; ax < D; ++ax)
                    l += a[comp][g.shift(c, ax, +1)] - 2.0 * a[comp][c] +
                         a[comp][g.shift(c, ax, -1)];
                lap[comp][c] = l / (g.h * g.h);
            }
    }

    for (std::int64_t c = 0; c < nc; ++c) {
        PointState<D> uc;
        for (int b = 0; b < kXi; ++b) uc.xi[b] = a[b][c];
        for (int i = 0; i < D; ++i) uc.v[i] = a[kXi + i][c];
        uc.theta = theta_cache[c];

        // centered flux divergence from the pointwise assembly at neighbors
        for (int ax = 0; ax < D; ++ax) {
            const std::int64_t cu = g.shift(c, ax, +1), cd = g.shift(c, ax, -1);
            PointState<D> up, dn;
            for (int b = 0; b < kXi; ++b) up.xi[b] = a[b][cu];
            for (int i = 0; i < D; ++i) up.v[i] = a[kXi + i][cu];
            up.theta = theta_cache[cu];
            for (int b = 0; b < kXi; ++b) dn.xi[b] = a[b][cd];
            for (int i = 0; i < D; ++i) dn.v[i] = a[kXi + i][cd];
            dn.theta = theta_cache[cd];
            const AugmentedEval<D> eu = assemble(law, up);
            const AugmentedEval<D> ed = assemble(law, dn);
            for (int comp = 0; comp < kComps; ++comp)
                rhs[comp][c] -= (eu.flux[ax][comp] - ed.flux[ax][comp]) / (2.0 * g.h);
        }

        if (viscous) {
            for (int ax = 0; ax < D; ++ax) {
                const std::int64_t cu = g.shift(c, ax, +1), cd = g.shift(c, ax, -1);
                auto coeffs_at = [&](std::int64_t cc) {
                    Minors<D> xi;
                    for (int b = 0; b < kXi; ++b) xi[b] = a[b][cc];
                    const double th = theta_cache[cc];
                    return std::pair<double, double>(ops.coeffs.template mu<D>(xi, th),
                                                     ops.coeffs.template k<D>(xi, th));
                };
                const auto [mu_c, k_c] = coeffs_at(c);
                const auto [mu_u, k_u] = coeffs_at(cu);
                const auto [mu_d, k_d] = coeffs_at(cd);
                const double mu_up = 0.5 * (mu_c + mu_u), mu_dn = 0.5 * (mu_c + mu_d);
                const double k_up = 0.5 * (k_c + k_u), k_dn = 0.5 * (k_c + k_d);
                for (int i = 0; i < D; ++i) {
                    const double jup = a[kXi + i][cu] - a[kXi + i][c];
                    const double jdn = a[kXi + i][c] - a[kXi + i][cd];
                    rhs[kXi + i][c] += (mu_up * jup - mu_dn * jdn) / (g.h * g.h);
                    const double vb_up = 0.5 * (a[kXi + i][cu] + a[kXi + i][c]);
                    const double vb_dn = 0.5 * (a[kXi + i][c] + a[kXi + i][cd]);
                    rhs[kXi + D][c] +=
                        (mu_up * vb_up * jup - mu_dn * vb_dn * jdn) / (g.h * g.h);
                }
                rhs[kXi + D][c] += (k_up * (theta_cache[cu] - theta_cache[c]) -
                                    k_dn * (theta_cache[c] - theta_cache[cd])) /
                                   (g.h * g.h);
            }
        }

        if (hyper) {
            const double eps_h3 = ops.hyperviscosity * g.h * g.h * g.h;
            for (int comp = 0; comp < kComps; ++comp) {
                double l = 0.0;
                for (int ax = 0; ax < D; ++ax)
                    l += lap[comp][g.shift(c, ax, +1)] - 2.0 * lap[comp][c] +
                         lap[comp][g.shift(c, ax, -1)];
                rhs[comp][c] -= eps_h3 * l / (g.h * g.h);
            }
        }

        if (ops.heat_supply) {
            std::array<double, D> x;
            for (int ax = 0; ax < D; ++ax) x[ax] = g.coord(c, ax);
            rhs[kXi + D][c] += ops.heat_supply(x, t);
        }
    }
    return true;
}

template bool eval_rhs_reference<2>(const SemiDiscrete<2>&, const std::vector<Field>&, double,
                                    std::vector<Field>&, Field&);
template bool eval_rhs_reference<3>(const SemiDiscrete<3>&, const std::vector<Field>&, double,
                                    std::vector<Field>&, Field&);

}  // namespace polytherm
