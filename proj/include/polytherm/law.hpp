/// @file law.hpp
/// @brief Polyconvex free-energy laws psi(xi, theta) on the minors vector,
///        with analytic first and second derivatives, derived entropy /
///        internal energy / Piola stress, and transport coefficients.

#ifndef POLYTHERM_LAW_HPP
#define POLYTHERM_LAW_HPP

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "polytherm/tensor.hpp"

namespace polytherm {

template <int D>
using MinorsMat = std::array<double, static_cast<std::size_t>(Minors<D>::kDim) * Minors<D>::kDim>;

struct GrowthExponents {
    double p = 2, q = 2, r = 2, ell = 2;
};

inline void require_positive_theta(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("law: temperature must be positive");
}

/// Free energy on the extended (minors, temperature) variables. Implementations
/// must be convex in the minors and strictly concave in theta on the admissible
/// set; the verification suite checks both numerically. Instances are immutable
/// after construction and safe to share across threads.
template <int D>
class FreeEnergy {
public:
    static constexpr int kXi = Minors<D>::kDim;

    virtual ~FreeEnergy() = default;

    virtual double psi(const Minors<D>& xi, double theta) const = 0;
    virtual MinorsVec<D> dpsi_dxi(const Minors<D>& xi, double theta) const = 0;
    virtual double dpsi_dtheta(const Minors<D>& xi, double theta) const = 0;
    virtual MinorsMat<D> d2psi_dxi2(const Minors<D>& xi, double theta) const = 0;
    virtual MinorsVec<D> d2psi_dxidtheta(const Minors<D>& xi, double theta) const = 0;
    virtual double d2psi_dtheta2(const Minors<D>& xi, double theta) const = 0;

    virtual GrowthExponents growth() const = 0;
    virtual std::string name() const = 0;

    /// Starting guess for recovering theta from the internal energy. The
    /// default is a cold start; separable laws override with a closed form.
    virtual double theta_guess(const Minors<D>&, double /*e_internal*/) const { return 1.0; }
};

template <int D>
inline double eta_hat(const FreeEnergy<D>& law, const Minors<D>& xi, double theta) {
    require_positive_theta(theta);
    return -law.dpsi_dtheta(xi, theta);
}

template <int D>
inline double e_hat(const FreeEnergy<D>& law, const Minors<D>& xi, double theta) {
    require_positive_theta(theta);
    return law.psi(xi, theta) - theta * law.dpsi_dtheta(xi, theta);
}

/// d(e_hat)/d(theta) = theta * d(eta_hat)/d(theta) = -theta * psi_thetatheta.
template <int D>
inline double de_hat_dtheta(const FreeEnergy<D>& law, const Minors<D>& xi, double theta) {
    return -theta * law.d2psi_dtheta2(xi, theta);
}

/// Piola stress by the chain rule through the minors vector:
/// Sigma_{ia} = dpsi/dxi^B (Phi(F), theta) dPhi^B/dF_{ia}(F).
template <int D>
inline Mat<D> piola_stress(const FreeEnergy<D>& law, const Mat<D>& f, double theta) {
    require_positive_theta(theta);
    return apply_dminors_t(f, law.dpsi_dxi(minors_of(f), theta));
}

enum class ThermalKind { quadratic, logarithmic };

struct LawParams {
    ThermalKind thermal = ThermalKind::quadratic;
    double alpha = 1.0;   // |F|^{p*} coefficient
    double beta = 1.0;    // |zeta|^2 coefficient (d=3 only)
    double delta = 1.0;   // (w-1)^2 coefficient
    double c_v = 1.0;     // heat capacity scale
    double gamma = 0.0;   // thermal expansion coupling (theta-theta0)(w-1)
    double theta0 = 1.0;  // reference temperature
    double kappa = 0.0;   // compression barrier kappa (w^-s - 1), off by default
    double s_exp = 2.0;   // barrier exponent
};

/// Built-in polyconvex family
///   psi = (alpha/2)|F|^{p*} + (beta/2)|zeta|^2 + h(w)
///         + gamma (theta - theta0)(w - 1) + thermal(theta),
/// with p* = 2 for d=2 and p* = 4 for d=3,
///   h(w) = (delta/2)(w-1)^2 + lambda0 (w-1) + kappa (w^-s - 1),
/// and thermal(theta) = -(c_v/2) theta^2 or -c_v theta log theta.
/// The linear offset lambda0 is calibrated in the constructor so that the
/// Piola stress vanishes at F = I, theta = theta0 (a rest state stays at rest
/// with zero stress, not merely zero stress divergence).
template <int D>
class PolyconvexLaw final : public FreeEnergy<D> {
public:
    static constexpr int kXi = Minors<D>::kDim;
    static constexpr int kW = kXi - 1;

    explicit PolyconvexLaw(const LawParams& p) : p_(p) {
        if (p.c_v <= 0 || p.alpha < 0 || p.beta < 0 || p.delta <= 0 || p.kappa < 0)
            throw std::invalid_argument("law: coefficients out of range");
        // Stress at identity is (s_F + s_zeta pull-back + h'(1) cof I) = c * I;
        // choose lambda0 to cancel the constant.
        const double mech = (D == 2) ? p.alpha : 6.0 * p.alpha + 2.0 * p.beta;
        lambda0_ = p.kappa * p.s_exp - mech;
    }

    double psi(const Minors<D>& xi, double theta) const override {
        require_positive_theta(theta);
        const double nf2 = f_norm2(xi);
        double val = (D == 2) ? 0.5 * p_.alpha * nf2 : 0.5 * p_.alpha * nf2 * nf2;
        if constexpr (D == 3) val += 0.5 * p_.beta * z_norm2(xi);
        val += h(xi.w());
        val += p_.gamma * (theta - p_.theta0) * (xi.w() - 1.0);
        val += thermal(theta);
        return val;
    }

    MinorsVec<D> dpsi_dxi(const Minors<D>& xi, double theta) const override {
        require_positive_theta(theta);
        MinorsVec<D> g{};
        const double fcoef = (D == 2) ? p_.alpha : 2.0 * p_.alpha * f_norm2(xi);
        for (int k = 0; k < D * D; ++k) g[k] = fcoef * xi[k];
        if constexpr (D == 3)
            for (int k = 0; k < 9; ++k) g[D * D + k] = p_.beta * xi[D * D + k];
        g[kW] = dh(xi.w()) + p_.gamma * (theta - p_.theta0);
        return g;
    }

    double dpsi_dtheta(const Minors<D>& xi, double theta) const override {
        require_positive_theta(theta);
        return p_.gamma * (xi.w() - 1.0) + dthermal(theta);
    }

    MinorsMat<D> d2psi_dxi2(const Minors<D>& xi, double theta) const override {
        require_positive_theta(theta);
        MinorsMat<D> hm{};
        auto at = [&hm](int r, int c) -> double& { return hm[r * kXi + c]; };
        if constexpr (D == 2) {
            for (int k = 0; k < 4; ++k) at(k, k) = p_.alpha;
        } else {
            const double nf2 = f_norm2(xi);
            for (int k = 0; k < 9; ++k) at(k, k) = 2.0 * p_.alpha * nf2;
            for (int k = 0; k < 9; ++k)
                for (int l = 0; l < 9; ++l) at(k, l) += 4.0 * p_.alpha * xi[k] * xi[l];
            for (int k = 0; k < 9; ++k) at(9 + k, 9 + k) = p_.beta;
        }
        at(kW, kW) = d2h(xi.w());
        return hm;
    }

    MinorsVec<D> d2psi_dxidtheta(const Minors<D>&, double theta) const override {
        require_positive_theta(theta);
        MinorsVec<D> g{};
        g[kW] = p_.gamma;
        return g;
    }

    double d2psi_dtheta2(const Minors<D>&, double theta) const override {
        require_positive_theta(theta);
        return (p_.thermal == ThermalKind::quadratic) ? -p_.c_v : -p_.c_v / theta;
    }

    GrowthExponents growth() const override {
        GrowthExponents g;
        g.p = (D == 2) ? 2 : 4;
        g.q = 2;
        g.r = 2;
        g.ell = (p_.thermal == ThermalKind::quadratic) ? 2 : 1;
        return g;
    }

    std::string name() const override {
        return (p_.thermal == ThermalKind::quadratic) ? "polyconvex-quadratic" : "polyconvex-log";
    }

    /// e_hat is separable for this family: e = base(xi) + thermal_e(theta)
    /// with thermal_e = (c_v/2) theta^2 or c_v theta, so the inverse map is
    /// available in closed form (used as a Newton warm start).
    double theta_guess(const Minors<D>& xi, double e_internal) const override {
        const double base = base_energy(xi);
        const double te = e_internal - base;
        if (p_.thermal == ThermalKind::quadratic)
            return std::sqrt(std::max(2.0 * te / p_.c_v, 1e-12));
        return std::max(te / p_.c_v, 1e-12);
    }

    const LawParams& params() const { return p_; }
    double lambda0() const { return lambda0_; }

private:
    static double f_norm2(const Minors<D>& xi) {
        double s = 0.0;
        for (int k = 0; k < D * D; ++k) s += xi[k] * xi[k];
        return s;
    }
    static double z_norm2(const Minors<D>& xi) {
        double s = 0.0;
        for (int k = 0; k < 9; ++k) s += xi[D * D + k] * xi[D * D + k];
        return s;
    }

    double h(double w) const {
        double v = 0.5 * p_.delta * (w - 1.0) * (w - 1.0) + lambda0_ * (w - 1.0);
        if (p_.kappa > 0.0) {
            if (!(w > 0.0)) throw std::domain_error("law: w <= 0 with compression barrier");
            v += p_.kappa * (std::pow(w, -p_.s_exp) - 1.0);
        }
        return v;
    }
    double dh(double w) const {
        double v = p_.delta * (w - 1.0) + lambda0_;
        if (p_.kappa > 0.0) {
            if (!(w > 0.0)) throw std::domain_error("law: w <= 0 with compression barrier");
            v -= p_.kappa * p_.s_exp * std::pow(w, -p_.s_exp - 1.0);
        }
        return v;
    }
    double d2h(double w) const {
        double v = p_.delta;
        if (p_.kappa > 0.0) {
            if (!(w > 0.0)) throw std::domain_error("law: w <= 0 with compression barrier");
            v += p_.kappa * p_.s_exp * (p_.s_exp + 1.0) * std::pow(w, -p_.s_exp - 2.0);
        }
        return v;
    }

    double thermal(double theta) const {
        return (p_.thermal == ThermalKind::quadratic) ? -0.5 * p_.c_v * theta * theta
                                                      : -p_.c_v * theta * std::log(theta);
    }
    double dthermal(double theta) const {
        return (p_.thermal == ThermalKind::quadratic) ? -p_.c_v * theta
                                                      : -p_.c_v * (std::log(theta) + 1.0);
    }

    // e_hat(xi, theta) minus its theta-only part; gamma contributes
    // -gamma theta0 (w-1) after the Legendre shift.
    double base_energy(const Minors<D>& xi) const {
        const double nf2 = f_norm2(xi);
        double v = (D == 2) ? 0.5 * p_.alpha * nf2 : 0.5 * p_.alpha * nf2 * nf2;
        if constexpr (D == 3) v += 0.5 * p_.beta * z_norm2(xi);
        v += h(xi.w());
        v -= p_.gamma * p_.theta0 * (xi.w() - 1.0);
        return v;
    }

    LawParams p_;
    double lambda0_ = 0.0;
};

template <int D>
std::unique_ptr<FreeEnergy<D>> make_law(const LawParams& p) {
    return std::make_unique<PolyconvexLaw<D>>(p);
}

enum class CoeffKind { constant, inv_theta, theta_cubed };

/// Newtonian viscosity / Fourier conduction amplitudes with a pluggable state
/// dependence. Amplitudes mu0, k0 scale the whole coefficient, so both tend
/// to zero with their amplitude.
struct TransportCoeffs {
    CoeffKind kind = CoeffKind::constant;
    double mu0 = 0.0;
    double k0 = 0.0;

    template <int D>
    double mu(const Minors<D>&, double theta) const {
        switch (kind) {
            case CoeffKind::inv_theta: return mu0 / theta;
            default: return mu0;
        }
    }
    template <int D>
    double k(const Minors<D>&, double theta) const {
        switch (kind) {
            case CoeffKind::theta_cubed: return k0 * theta * theta * theta;
            default: return k0;
        }
    }
};

}  // namespace polytherm

#endif  // POLYTHERM_LAW_HPP
