/// @file fd.hpp
/// @brief Central finite-difference oracles for the analytic derivatives of
///        the laws, the minors Jacobian, and the symmetrizer assembly. Test
///        and verification code only; never called from the solver path.

#ifndef POLYTHERM_FD_HPP
#define POLYTHERM_FD_HPP

#include <cmath>
#include <vector>

#include "polytherm/augmented.hpp"
#include "polytherm/law.hpp"

namespace polytherm {

/// Worst relative mismatch between the analytic first/second derivatives of a
/// law and central finite differences at one state.
template <int D>
double law_derivative_mismatch(const FreeEnergy<D>& law, const Minors<D>& xi, double theta,
                               double h = 1e-5) {
    constexpr int kXi = Minors<D>::kDim;
    double worst = 0.0;
    auto rel = [&](double analytic, double fd) {
        const double scale = std::max({1.0, std::abs(analytic), std::abs(fd)});
        worst = std::max(worst, std::abs(analytic - fd) / scale);
    };

    const MinorsVec<D> g = law.dpsi_dxi(xi, theta);
    const MinorsMat<D> hess = law.d2psi_dxi2(xi, theta);
    const MinorsVec<D> mixed = law.d2psi_dxidtheta(xi, theta);
    for (int b = 0; b < kXi; ++b) {
        Minors<D> up = xi, dn = xi;
        up[b] += h;
        dn[b] -= h;
        rel(g[b], (law.psi(up, theta) - law.psi(dn, theta)) / (2 * h));
        const MinorsVec<D> gu = law.dpsi_dxi(up, theta);
        const MinorsVec<D> gd = law.dpsi_dxi(dn, theta);
        for (int a = 0; a < kXi; ++a) rel(hess[a * kXi + b], (gu[a] - gd[a]) / (2 * h));
        rel(mixed[b], (law.dpsi_dtheta(up, theta) - law.dpsi_dtheta(dn, theta)) / (2 * h));
    }
    rel(law.dpsi_dtheta(xi, theta),
        (law.psi(xi, theta + h) - law.psi(xi, theta - h)) / (2 * h));
    rel(law.d2psi_dtheta2(xi, theta),
        (law.dpsi_dtheta(xi, theta + h) - law.dpsi_dtheta(xi, theta - h)) / (2 * h));
    // Maxwell symmetry: theta-derivative of grad_xi vs xi-derivative of grad_theta
    const MinorsVec<D> gu = law.dpsi_dxi(xi, theta + h);
    const MinorsVec<D> gd = law.dpsi_dxi(xi, theta - h);
    for (int b = 0; b < kXi; ++b) rel(mixed[b], (gu[b] - gd[b]) / (2 * h));
    return worst;
}

/// Worst relative mismatch of the analytic minors Jacobian against finite
/// differences of Phi.
template <int D>
double minors_jacobian_mismatch(const Mat<D>& f, double h = 1e-5) {
    constexpr int kXi = Minors<D>::kDim;
    double worst = 0.0;
    for (int c = 0; c < D * D; ++c) {
        Mat<D> up = f, dn = f, dir;
        up.a[c] += h;
        dn.a[c] -= h;
        dir.a[c] = 1.0;
        const Minors<D> analytic = apply_dminors(f, dir);
        const Minors<D> pu = minors_of(up), pd = minors_of(dn);
        for (int b = 0; b < kXi; ++b) {
            const double fd = (pu[b] - pd[b]) / (2 * h);
            const double scale = std::max({1.0, std::abs(analytic[b]), std::abs(fd)});
            worst = std::max(worst, std::abs(analytic[b] - fd) / scale);
        }
    }
    return worst;
}

/// Piola stress vs finite differences of psi(F, theta) = psihat(Phi(F), theta).
template <int D>
double piola_stress_mismatch(const FreeEnergy<D>& law, const Mat<D>& f, double theta,
                             double h = 1e-5) {
    const Mat<D> sigma = piola_stress(law, f, theta);
    double worst = 0.0;
    for (int c = 0; c < D * D; ++c) {
        Mat<D> up = f, dn = f;
        up.a[c] += h;
        dn.a[c] -= h;
        const double fd =
            (law.psi(minors_of(up), theta) - law.psi(minors_of(dn), theta)) / (2 * h);
        const double scale = std::max({1.0, std::abs(sigma.a[c]), std::abs(fd)});
        worst = std::max(worst, std::abs(sigma.a[c] - fd) / scale);
    }
    return worst;
}

/// Finite-difference assembly of grad^2 H - sum_k G^k grad^2 A^k. Second
/// derivatives by the centered four-point formula.
template <int D>
std::vector<double> fd_symmetrizer(const FreeEnergy<D>& law, const PointState<D>& u,
                                   double h = 1e-4) {
    constexpr int n = state_dim<D>();
    const AugmentedEval<D> base = assemble(law, u);
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r) {
        for (int c = r; c < n; ++c) {
            const auto pp = assemble(law, detail::perturbed(detail::perturbed(u, r, h), c, h));
            const auto pm = assemble(law, detail::perturbed(detail::perturbed(u, r, h), c, -h));
            const auto mp = assemble(law, detail::perturbed(detail::perturbed(u, r, -h), c, h));
            const auto mm = assemble(law, detail::perturbed(detail::perturbed(u, r, -h), c, -h));
            double val = (pp.entropy - pm.entropy - mp.entropy + mm.entropy) / (4 * h * h);
            for (int k = 0; k < n; ++k)
                val -= base.multiplier[k] *
                       (pp.conserved[k] - pm.conserved[k] - mp.conserved[k] + mm.conserved[k]) /
                       (4 * h * h);
            m[r * n + c] = m[c * n + r] = val;
        }
    }
    return m;
}

}  // namespace polytherm

#endif  // POLYTHERM_FD_HPP
