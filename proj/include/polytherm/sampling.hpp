/// @file sampling.hpp
/// @brief Deterministic random sampling of admissible states: the bounded
///        reference set Gamma_{M,delta}, the admissible verification box, and
///        shells of prescribed weighted norm for growth/far-field checks.

#ifndef POLYTHERM_SAMPLING_HPP
#define POLYTHERM_SAMPLING_HPP

#include <cmath>
#include <random>

#include "polytherm/augmented.hpp"
#include "polytherm/law.hpp"

namespace polytherm {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

private:
    std::mt19937_64 eng_;
};

/// Matrix uniformly distributed in the Frobenius ball of radius rmax.
template <int D>
inline Mat<D> sample_mat_ball(Rng& rng, double rmax) {
    Mat<D> m;
    double n2 = 0.0;
    for (int k = 0; k < D * D; ++k) {
        m.a[k] = rng.normal();
        n2 += m.a[k] * m.a[k];
    }
    const double r = rmax * std::pow(rng.uniform(0.0, 1.0), 1.0 / (D * D));
    const double scale = r / std::max(std::sqrt(n2), 1e-300);
    for (int k = 0; k < D * D; ++k) m.a[k] *= scale;
    return m;
}

struct SampleBox {
    double f_max = 3.0;
    double z_max = 3.0;
    double w_lo = 0.2, w_hi = 5.0;
    double th_lo = 0.2, th_hi = 5.0;
    double v_max = 3.0;
};

/// A state from the admissible verification box. The minors slots are sampled
/// independently (the checks quantify over the whole extended state space,
/// not just the constraint manifold).
template <int D>
inline PointState<D> sample_box(Rng& rng, const SampleBox& box = {}) {
    PointState<D> u;
    u.xi.set_f(sample_mat_ball<D>(rng, box.f_max));
    if constexpr (D == 3) u.xi.set_z(sample_mat_ball<3>(rng, box.z_max));
    u.xi.set_w(rng.uniform(box.w_lo, box.w_hi));
    for (int i = 0; i < D; ++i) u.v[i] = rng.uniform(-box.v_max, box.v_max);
    u.theta = rng.uniform(box.th_lo, box.th_hi);
    return u;
}

/// A reference state in Gamma_{M,delta}: all minors and velocity components
/// bounded by M, temperature in [delta, M].
template <int D>
inline PointState<D> sample_gamma(Rng& rng, double m_bound, double delta) {
    PointState<D> u;
    u.xi.set_f(sample_mat_ball<D>(rng, m_bound));
    if constexpr (D == 3) u.xi.set_z(sample_mat_ball<3>(rng, m_bound));
    u.xi.set_w(rng.uniform(-m_bound, m_bound));
    for (int i = 0; i < D; ++i) u.v[i] = rng.uniform(-m_bound, m_bound);
    u.theta = rng.uniform(delta, m_bound);
    return u;
}

/// |xi|_{p,q,r} = |F|^p + |zeta|^q + |w|^r.
template <int D>
inline double weighted_norm(const Minors<D>& xi, const GrowthExponents& g) {
    double nf = 0.0;
    for (int k = 0; k < D * D; ++k) nf += xi[k] * xi[k];
    double val = std::pow(nf, 0.5 * g.p);
    if constexpr (D == 3) {
        double nz = 0.0;
        for (int k = 0; k < 9; ++k) nz += xi[D * D + k] * xi[D * D + k];
        val += std::pow(nz, 0.5 * g.q);
    }
    val += std::pow(std::abs(xi.w()), g.r);
    return val;
}

template <int D>
inline double weighted_norm_theta(const Minors<D>& xi, double theta, const GrowthExponents& g) {
    return weighted_norm(xi, g) + std::pow(theta, g.ell);
}

/// State on the shell |xi|_{p,q,r} + theta^ell (+ |v|^2 when with_v) = radius,
/// found by scaling a random direction; the shell value is strictly monotone
/// in the scale factor, so a bisection lands on it.
template <int D>
inline PointState<D> sample_shell(Rng& rng, const GrowthExponents& g, double radius,
                                  bool with_v) {
    PointState<D> dir;
    dir.xi.set_f(sample_mat_ball<D>(rng, 1.0));
    if constexpr (D == 3) dir.xi.set_z(sample_mat_ball<3>(rng, 1.0));
    dir.xi.set_w(rng.uniform(-1.0, 1.0));
    dir.theta = rng.uniform(0.05, 1.0);
    for (int i = 0; i < D; ++i) dir.v[i] = with_v ? rng.uniform(-1.0, 1.0) : 0.0;

    auto value_at = [&](double t) {
        Minors<D> xi = dir.xi;
        for (int b = 0; b < Minors<D>::kDim; ++b) xi[b] *= t;
        double val = weighted_norm_theta(xi, t * dir.theta, g);
        if (with_v)
            for (int i = 0; i < D; ++i) val += t * t * dir.v[i] * dir.v[i];
        return val;
    };
    double lo = 0.0, hi = 1.0;
    while (value_at(hi) < radius) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (value_at(mid) < radius ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    PointState<D> u;
    for (int b = 0; b < Minors<D>::kDim; ++b) u.xi[b] = t * dir.xi[b];
    u.theta = t * dir.theta;
    for (int i = 0; i < D; ++i) u.v[i] = t * dir.v[i];
    return u;
}

}  // namespace polytherm

#endif  // POLYTHERM_SAMPLING_HPP
