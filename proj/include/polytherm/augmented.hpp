/// @file augmented.hpp
/// @brief The augmented first-order system in the extended variables
///        U = (xi, v, theta): conserved vector, fluxes, entropy multiplier,
///        and the block-diagonal symmetrizer, with numerical verification of
///        the entropy-pair structure and of symmetrizability.

#ifndef POLYTHERM_AUGMENTED_HPP
#define POLYTHERM_AUGMENTED_HPP

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "polytherm/jacobi.hpp"
#include "polytherm/law.hpp"
#include "polytherm/tensor.hpp"

namespace polytherm {

template <int D>
struct PointState {
    Minors<D> xi;
    Vec<D> v{};
    double theta = 1.0;
};

template <int D>
constexpr int state_dim() {
    return Minors<D>::kDim + D + 1;  // 8 for d=2, 23 for d=3
}

template <int D>
using StateVec = std::array<double, state_dim<D>()>;

/// Pointwise evaluation of the augmented system at one state. Fluxes are
/// written with the minus signs absorbed, so the balance laws read
/// dt A + d_alpha f_alpha = source.
template <int D>
struct AugmentedEval {
    static constexpr int kN = state_dim<D>();
    StateVec<D> conserved{};                 // A(U) = (xi, v, |v|^2/2 + e)
    std::array<StateVec<D>, D> flux{};       // f_alpha(U)
    StateVec<D> multiplier{};                // G(U) = (psi_xi, v, -1)/theta
    double entropy = 0.0;                    // H(U) = -eta_hat
};

template <int D>
inline AugmentedEval<D> assemble(const FreeEnergy<D>& law, const PointState<D>& u) {
    require_positive_theta(u.theta);
    constexpr int kXi = Minors<D>::kDim;
    AugmentedEval<D> out;

    double v2 = 0.0;
    for (int i = 0; i < D; ++i) v2 += u.v[i] * u.v[i];
    for (int b = 0; b < kXi; ++b) out.conserved[b] = u.xi[b];
    for (int i = 0; i < D; ++i) out.conserved[kXi + i] = u.v[i];
    out.conserved[kXi + D] = 0.5 * v2 + e_hat(law, u.xi, u.theta);

    const MinorsVec<D> s = law.dpsi_dxi(u.xi, u.theta);
    const Mat<D> f = u.xi.fmat();
    const Mat<D> sigma = apply_dminors_t(f, s);
    for (int al = 0; al < D; ++al) {
        Mat<D> dir;  // dir_{ib} = v_i delta_{b,alpha}
        for (int i = 0; i < D; ++i) dir(i, al) = u.v[i];
        const Minors<D> gv = apply_dminors(f, dir);
        double sv = 0.0;
        for (int i = 0; i < D; ++i) sv += sigma(i, al) * u.v[i];
        for (int b = 0; b < kXi; ++b) out.flux[al][b] = -gv[b];
        for (int i = 0; i < D; ++i) out.flux[al][kXi + i] = -sigma(i, al);
        out.flux[al][kXi + D] = -sv;
    }

    const double inv_theta = 1.0 / u.theta;
    for (int b = 0; b < kXi; ++b) out.multiplier[b] = inv_theta * s[b];
    for (int i = 0; i < D; ++i) out.multiplier[kXi + i] = inv_theta * u.v[i];
    out.multiplier[kXi + D] = -inv_theta;

    out.entropy = -eta_hat(law, u.xi, u.theta);
    return out;
}

/// The symmetrizer grad^2 H - sum_k G^k grad^2 A^k, assembled analytically.
/// All cross blocks cancel exactly, leaving
/// block-diag( psi_xixi / theta, I_d / theta, eta_theta / theta ).
template <int D>
inline std::vector<double> symmetrizer(const FreeEnergy<D>& law, const PointState<D>& u) {
    require_positive_theta(u.theta);
    constexpr int kXi = Minors<D>::kDim;
    constexpr int n = state_dim<D>();
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    const double inv_theta = 1.0 / u.theta;
    const MinorsMat<D> hxx = law.d2psi_dxi2(u.xi, u.theta);
    for (int r = 0; r < kXi; ++r)
        for (int c = 0; c < kXi; ++c) m[r * n + c] = inv_theta * hxx[r * kXi + c];
    for (int i = 0; i < D; ++i) m[(kXi + i) * n + (kXi + i)] = inv_theta;
    m[(kXi + D) * n + (kXi + D)] = -inv_theta * law.d2psi_dtheta2(u.xi, u.theta);
    return m;
}

namespace detail {

template <int D>
inline PointState<D> perturbed(const PointState<D>& u, int comp, double h) {
    constexpr int kXi = Minors<D>::kDim;
    PointState<D> p = u;
    if (comp < kXi)
        p.xi[comp] += h;
    else if (comp < kXi + D)
        p.v[comp - kXi] += h;
    else
        p.theta += h;
    return p;
}

}  // namespace detail

/// Finite-difference check of the entropy-pair relations for the multiplier G.
///
/// Returns (time residual, flux residual):
///  - time:  max component of grad H - G . grad A, which vanishes pointwise;
///  - flux:  with entropy flux q == 0, the defect of grad q_a - G . grad f_a.
///    The defect lives only on deformation-gradient directions and is
///    antisymmetric in the two referential indices, so it annihilates every
///    curl-free F-field; the reported residual is the curl-compatible part
///    (all non-F components plus the symmetrization over the index pair),
///    which must vanish. Both residuals decay at second order in h.
template <int D>
inline std::pair<double, double> entropy_pair_residual(const FreeEnergy<D>& law,
                                                       const PointState<D>& u, double h) {
    constexpr int kXi = Minors<D>::kDim;
    constexpr int n = state_dim<D>();
    const AugmentedEval<D> base = assemble(law, u);

    std::array<double, n> grad_h{};
    std::array<std::array<double, n>, n> grad_a{};             // [comp][k]
    std::array<std::array<std::array<double, n>, n>, D> grad_f{};  // [al][comp][k]
    for (int c = 0; c < n; ++c) {
        const AugmentedEval<D> up = assemble(law, detail::perturbed(u, c, h));
        const AugmentedEval<D> dn = assemble(law, detail::perturbed(u, c, -h));
        grad_h[c] = (up.entropy - dn.entropy) / (2.0 * h);
        for (int k = 0; k < n; ++k) grad_a[c][k] = (up.conserved[k] - dn.conserved[k]) / (2.0 * h);
        for (int al = 0; al < D; ++al)
            for (int k = 0; k < n; ++k)
                grad_f[al][c][k] = (up.flux[al][k] - dn.flux[al][k]) / (2.0 * h);
    }

    double res_time = 0.0;
    for (int c = 0; c < n; ++c) {
        double ga = 0.0;
        for (int k = 0; k < n; ++k) ga += base.multiplier[k] * grad_a[c][k];
        res_time = std::max(res_time, std::abs(grad_h[c] - ga));
    }

    // defect[al][c] = (grad q_al)_c - (G . grad f_al)_c with q == 0
    std::array<std::array<double, n>, D> defect{};
    for (int al = 0; al < D; ++al)
        for (int c = 0; c < n; ++c) {
            double gf = 0.0;
            for (int k = 0; k < n; ++k) gf += base.multiplier[k] * grad_f[al][c][k];
            defect[al][c] = -gf;
        }

    double res_flux = 0.0;
    for (int al = 0; al < D; ++al)
        for (int c = 0; c < n; ++c) {
            if (c < D * D) {
                const int i = c / D, be = c % D;
                // symmetric part over the referential pair (al, be)
                const double sym = 0.5 * (defect[al][i * D + be] + defect[be][i * D + al]);
                res_flux = std::max(res_flux, std::abs(sym));
            } else {
                res_flux = std::max(res_flux, std::abs(defect[al][c]));
            }
        }
    return {res_time, res_flux};
}

struct HyperbolicityReport {
    bool pass = false;
    int n_samples = 0;
    int n_failures = 0;
    double min_eigenvalue = 0.0;   // over all samples
    double worst_ratio = 0.0;      // min eig / matrix norm at the worst sample
};

/// Positivity of the symmetrizer across a sample set; positivity at every
/// admissible state is exactly Friedrichs-Lax symmetrizability.
template <int D>
inline HyperbolicityReport hyperbolicity_certificate(const FreeEnergy<D>& law,
                                                     std::span<const PointState<D>> samples,
                                                     double tol = 1e-10) {
    constexpr int n = state_dim<D>();
    HyperbolicityReport rep;
    rep.n_samples = static_cast<int>(samples.size());
    rep.min_eigenvalue = 1e300;
    rep.worst_ratio = 1e300;
    for (const auto& u : samples) {
        const auto m = symmetrizer(law, u);
        double norm = 0.0;
        for (double x : m) norm = std::max(norm, std::abs(x));
        const auto ev = symmetric_eigenvalues(m, n);
        const double ratio = ev.front() / std::max(norm, 1e-300);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, ev.front());
        rep.worst_ratio = std::min(rep.worst_ratio, ratio);
        if (!(ratio > tol)) ++rep.n_failures;
    }
    rep.pass = (rep.n_failures == 0) && rep.n_samples > 0;
    return rep;
}

}  // namespace polytherm

#endif  // POLYTHERM_AUGMENTED_HPP
