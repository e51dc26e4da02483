/// @file relentropy.hpp
/// @brief Relative free energy / entropy / stress-derivative (second-order
///        Taylor remainders about a reference state) and the weighted
///        relative-entropy density I used as the distance between two
///        solutions.

#ifndef POLYTHERM_RELENTROPY_HPP
#define POLYTHERM_RELENTROPY_HPP

#include <cmath>

#include "polytherm/augmented.hpp"
#include "polytherm/fields.hpp"
#include "polytherm/law.hpp"

namespace polytherm {

/// psi(xi,theta | xib,thetab) = psi - psib - psib_xi . (xi - xib) + etab (theta - thetab).
/// Since psi_theta = -eta this is the joint second-order Taylor remainder.
template <int D>
inline double rel_free_energy(const FreeEnergy<D>& law, const Minors<D>& xi, double theta,
                              const Minors<D>& xib, double thetab) {
    require_positive_theta(theta);
    require_positive_theta(thetab);
    const MinorsVec<D> sb = law.dpsi_dxi(xib, thetab);
    double lin = 0.0;
    for (int b = 0; b < Minors<D>::kDim; ++b) lin += sb[b] * (xi[b] - xib[b]);
    return law.psi(xi, theta) - law.psi(xib, thetab) - lin +
           eta_hat(law, xib, thetab) * (theta - thetab);
}

/// eta(xi,theta | xib,thetab): Taylor remainder of the entropy.
template <int D>
inline double rel_eta(const FreeEnergy<D>& law, const Minors<D>& xi, double theta,
                      const Minors<D>& xib, double thetab) {
    require_positive_theta(theta);
    require_positive_theta(thetab);
    // eta_xi = -psi_thetaxi, eta_theta = -psi_thetatheta
    const MinorsVec<D> mixed = law.d2psi_dxidtheta(xib, thetab);
    double lin = 0.0;
    for (int b = 0; b < Minors<D>::kDim; ++b) lin += -mixed[b] * (xi[b] - xib[b]);
    lin += -law.d2psi_dtheta2(xib, thetab) * (theta - thetab);
    return eta_hat(law, xi, theta) - eta_hat(law, xib, thetab) - lin;
}

/// Componentwise Taylor remainder of dpsi/dxi^B.
template <int D>
inline MinorsVec<D> rel_stress_deriv(const FreeEnergy<D>& law, const Minors<D>& xi, double theta,
                                     const Minors<D>& xib, double thetab) {
    require_positive_theta(theta);
    require_positive_theta(thetab);
    constexpr int kXi = Minors<D>::kDim;
    const MinorsVec<D> s = law.dpsi_dxi(xi, theta);
    const MinorsVec<D> sb = law.dpsi_dxi(xib, thetab);
    const MinorsMat<D> hb = law.d2psi_dxi2(xib, thetab);
    const MinorsVec<D> mb = law.d2psi_dxidtheta(xib, thetab);
    MinorsVec<D> out{};
    for (int b = 0; b < kXi; ++b) {
        double lin = mb[b] * (theta - thetab);
        for (int a = 0; a < kXi; ++a) lin += hb[b * kXi + a] * (xi[a] - xib[a]);
        out[b] = s[b] - sb[b] - lin;
    }
    return out;
}

/// Pointwise relative-entropy density
///   I(U|Ub) = psi(.|.) + |v - vb|^2 / 2 + (eta - etab)(theta - thetab)
/// which equals thetab * H(U|Ub). Nonnegative whenever the reference state is
/// admissible and the law is convex-concave.
template <int D>
inline double rel_entropy_density(const FreeEnergy<D>& law, const PointState<D>& u,
                                  const PointState<D>& ub) {
    double dv2 = 0.0;
    for (int i = 0; i < D; ++i) dv2 += (u.v[i] - ub.v[i]) * (u.v[i] - ub.v[i]);
    return rel_free_energy(law, u.xi, u.theta, ub.xi, ub.theta) + 0.5 * dv2 +
           (eta_hat(law, u.xi, u.theta) - eta_hat(law, ub.xi, ub.theta)) * (u.theta - ub.theta);
}

/// Grid integral of I over the torus.
template <int D>
inline double rel_entropy_integral(const FreeEnergy<D>& law, const Grid<D>& g,
                                   const FrameFields<D>& u, const FrameFields<D>& ub) {
    return integrate(g, [&](std::int64_t c) {
        return rel_entropy_density(law, u.at(c), ub.at(c));
    });
}

}  // namespace polytherm

#endif  // POLYTHERM_RELENTROPY_HPP
