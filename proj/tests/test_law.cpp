/// @file test_law.cpp
/// @brief Constitutive laws: closed-form entropy / internal energy, analytic
///        derivatives against finite differences, stress chain rule, the
///        Gibbs / growth / coefficient-bound checks, and theta recovery.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polytherm/checks.hpp"
#include "polytherm/fd.hpp"
#include "polytherm/rhs.hpp"
#include "polytherm/sampling.hpp"

using namespace polytherm;

namespace {

LawParams default_params(ThermalKind kind = ThermalKind::quadratic, double gamma = 0.0) {
    LawParams p;
    p.thermal = kind;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.delta = 1.0;
    p.c_v = 1.0;
    p.gamma = gamma;
    p.theta0 = 1.0;
    return p;
}

// test-only law with a pure Frobenius mechanical part, W = (alpha/2)|F|^2
template <int D>
class FrobeniusOnlyLaw final : public FreeEnergy<D> {
public:
    explicit FrobeniusOnlyLaw(double alpha) : alpha_(alpha) {}
    double psi(const Minors<D>& xi, double theta) const override {
        double nf2 = 0.0;
        for (int k = 0; k < D * D; ++k) nf2 += xi[k] * xi[k];
        return 0.5 * alpha_ * nf2 - 0.5 * theta * theta;
    }
    MinorsVec<D> dpsi_dxi(const Minors<D>& xi, double) const override {
        MinorsVec<D> g{};
        for (int k = 0; k < D * D; ++k) g[k] = alpha_ * xi[k];
        return g;
    }
    double dpsi_dtheta(const Minors<D>&, double theta) const override { return -theta; }
    MinorsMat<D> d2psi_dxi2(const Minors<D>&, double) const override {
        MinorsMat<D> h{};
        for (int k = 0; k < D * D; ++k) h[k * Minors<D>::kDim + k] = alpha_;
        return h;
    }
    MinorsVec<D> d2psi_dxidtheta(const Minors<D>&, double) const override { return {}; }
    double d2psi_dtheta2(const Minors<D>&, double) const override { return -1.0; }
    GrowthExponents growth() const override { return {}; }
    std::string name() const override { return "frobenius-only"; }

private:
    double alpha_;
};

// test-only law with a pure determinant part, W = h(w)
template <int D>
class DetOnlyLaw final : public FreeEnergy<D> {
public:
    double psi(const Minors<D>& xi, double theta) const override {
        const double w = xi.w();
        return 0.5 * (w - 1.0) * (w - 1.0) - 0.5 * theta * theta;
    }
    MinorsVec<D> dpsi_dxi(const Minors<D>& xi, double) const override {
        MinorsVec<D> g{};
        g[Minors<D>::kDim - 1] = xi.w() - 1.0;
        return g;
    }
    double dpsi_dtheta(const Minors<D>&, double theta) const override { return -theta; }
    MinorsMat<D> d2psi_dxi2(const Minors<D>&, double) const override {
        MinorsMat<D> h{};
        h[(Minors<D>::kDim - 1) * Minors<D>::kDim + (Minors<D>::kDim - 1)] = 1.0;
        return h;
    }
    MinorsVec<D> d2psi_dxidtheta(const Minors<D>&, double) const override { return {}; }
    double d2psi_dtheta2(const Minors<D>&, double) const override { return -1.0; }
    GrowthExponents growth() const override { return {}; }
    std::string name() const override { return "det-only"; }
};

// sandwich-violating law for the growth counterexample: exponential energy
template <int D>
class ExponentialLaw final : public FreeEnergy<D> {
public:
    double psi(const Minors<D>& xi, double theta) const override {
        return std::exp(0.1 * xi.w() * xi.w()) - 0.5 * theta * theta;
    }
    MinorsVec<D> dpsi_dxi(const Minors<D>& xi, double) const override {
        MinorsVec<D> g{};
        g[Minors<D>::kDim - 1] = 0.2 * xi.w() * std::exp(0.1 * xi.w() * xi.w());
        return g;
    }
    double dpsi_dtheta(const Minors<D>&, double theta) const override { return -theta; }
    MinorsMat<D> d2psi_dxi2(const Minors<D>& xi, double) const override {
        MinorsMat<D> h{};
        const double e = std::exp(0.1 * xi.w() * xi.w());
        h[(Minors<D>::kDim - 1) * Minors<D>::kDim + (Minors<D>::kDim - 1)] =
            (0.2 + 0.04 * xi.w() * xi.w()) * e;
        return h;
    }
    MinorsVec<D> d2psi_dxidtheta(const Minors<D>&, double) const override { return {}; }
    double d2psi_dtheta2(const Minors<D>&, double) const override { return -1.0; }
    GrowthExponents growth() const override { return {2, 2, 2, 2}; }
    std::string name() const override { return "exponential"; }
};

}  // namespace

TEST_CASE("closed-form entropy and internal energy, quadratic thermal factor") {
    PolyconvexLaw<2> law(default_params());
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const PointState<2> u = sample_box<2>(rng);
        CHECK(eta_hat(law, u.xi, u.theta) == doctest::Approx(u.theta).epsilon(1e-14));
        const double w_part = law.psi(u.xi, 1.0) + 0.5;  // W(xi) = psi + (c_v/2) theta^2 at theta=1
        CHECK(e_hat(law, u.xi, u.theta) ==
              doctest::Approx(w_part + 0.5 * u.theta * u.theta).epsilon(1e-12));
    }
}

TEST_CASE("closed-form entropy, logarithmic thermal factor") {
    PolyconvexLaw<2> law(default_params(ThermalKind::logarithmic));
    Rng rng(4);
    for (int i = 0; i < 50; ++i) {
        const PointState<2> u = sample_box<2>(rng);
        CHECK(eta_hat(law, u.xi, u.theta) ==
              doctest::Approx(1.0 + std::log(u.theta)).epsilon(1e-13));
    }
}

TEST_CASE("coupled law shifts the entropy by the volumetric term") {
    PolyconvexLaw<2> law(default_params(ThermalKind::quadratic, 0.1));
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const PointState<2> u = sample_box<2>(rng);
        CHECK(eta_hat(law, u.xi, u.theta) ==
              doctest::Approx(u.theta - 0.1 * (u.xi.w() - 1.0)).epsilon(1e-13));
    }
}

TEST_CASE_TEMPLATE("all analytic derivatives match finite differences", T,
                   std::integral_constant<int, 2>, std::integral_constant<int, 3>) {
    constexpr int D = T::value;
    for (ThermalKind kind : {ThermalKind::quadratic, ThermalKind::logarithmic}) {
        PolyconvexLaw<D> law(default_params(kind, 0.1));
        Rng rng(17);
        for (int i = 0; i < 200; ++i) {
            const PointState<D> u = sample_box<D>(rng);
            CHECK(law_derivative_mismatch(law, u.xi, u.theta) < 1e-6);
            CHECK(piola_stress_mismatch(law, u.xi.fmat(), u.theta) < 1e-6);
        }
    }
}

TEST_CASE_TEMPLATE("definitional identities", T, std::integral_constant<int, 2>,
                   std::integral_constant<int, 3>) {
    constexpr int D = T::value;
    PolyconvexLaw<D> law(default_params(ThermalKind::logarithmic, 0.2));
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
        const PointState<D> u = sample_box<D>(rng);
        // e - theta eta - psi = 0 exactly
        CHECK(e_hat(law, u.xi, u.theta) - u.theta * eta_hat(law, u.xi, u.theta) -
                  law.psi(u.xi, u.theta) ==
              doctest::Approx(0.0).epsilon(0).scale(1.0));
        // de/dtheta = theta deta/dtheta, via finite differences of eta
        const double h = 1e-6;
        const double deta = (eta_hat(law, u.xi, u.theta + h) - eta_hat(law, u.xi, u.theta - h)) /
                            (2 * h);
        CHECK(de_hat_dtheta(law, u.xi, u.theta) ==
              doctest::Approx(u.theta * deta).epsilon(1e-7));
        CHECK(de_hat_dtheta(law, u.xi, u.theta) > 0.0);
    }
}

TEST_CASE("stress closed forms for single-term laws") {
    Rng rng(23);
    FrobeniusOnlyLaw<2> frob(1.7);
    DetOnlyLaw<2> detlaw;
    for (int i = 0; i < 50; ++i) {
        const Mat<2> f = sample_mat_ball<2>(rng, 2.0);
        const Mat<2> s1 = piola_stress<2>(frob, f, 1.0);
        for (int k = 0; k < 4; ++k) CHECK(s1.a[k] == doctest::Approx(1.7 * f.a[k]));
        const Mat<2> s2 = piola_stress<2>(detlaw, f, 1.0);
        const Mat<2> expected = (determinant(f) - 1.0) * cofactor(f);
        for (int k = 0; k < 4; ++k)
            CHECK(s2.a[k] == doctest::Approx(expected.a[k]).epsilon(1e-13));
    }
}

TEST_CASE_TEMPLATE("built-in law is stress-free at the identity", T,
                   std::integral_constant<int, 2>, std::integral_constant<int, 3>) {
    constexpr int D = T::value;
    PolyconvexLaw<D> law(default_params(ThermalKind::quadratic, 0.1));
    const Mat<D> sigma = piola_stress<D>(law, Mat<D>::identity(), 1.0);
    CHECK(frobenius(sigma) < 1e-13);
    // with coupling, away from theta0 the thermal stress is gamma (theta - theta0) cof F
    const Mat<D> sigma_hot = piola_stress<D>(law, Mat<D>::identity(), 1.5);
    CHECK(sigma_hot(0, 0) == doctest::Approx(0.1 * 0.5).epsilon(1e-12));
}

TEST_CASE("gibbs check passes for built-ins and fails for a degenerate law") {
    Rng rng(29);
    std::vector<PointState<2>> samples;
    for (int i = 0; i < 300; ++i) samples.push_back(sample_box<2>(rng));

    PolyconvexLaw<2> good(default_params(ThermalKind::quadratic, 0.1));
    CHECK(check_gibbs<2>(good, samples).all_pass());

    LawParams bad = default_params();
    bad.alpha = 0.0;  // zero block in psi_xixi
    PolyconvexLaw<2> degenerate(bad);
    const CheckReport rep = check_gibbs<2>(degenerate, samples);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.rows[0].value < 1e-10);
}

TEST_CASE("growth check: sandwich holds for quadratic, fails for exponential energy") {
    PolyconvexLaw<2> law(default_params());
    Rng rng(31);
    const CheckReport rep = check_growth<2>(law, rng);
    CHECK(rep.all_pass());

    ExponentialLaw<2> expo;
    Rng rng2(37);
    const CheckReport rep2 = check_growth<2>(expo, rng2);
    CHECK_FALSE(rep2.all_pass());
}

TEST_CASE("growth check in 3-d declares p = 4 and the gradient ratio decays") {
    PolyconvexLaw<3> law(default_params());
    CHECK(law.growth().p == 4);
    Rng rng(41);
    const CheckReport rep = check_growth<3>(law, rng);
    CHECK(rep.all_pass());
    // the F and zeta gradient terms decay; the determinant slot plateaus for
    // the quadratic volumetric part, reported as WARN rather than FAIL
    for (const auto& r : rep.rows)
        if (r.name == "gradient_ratio_decay") CHECK(r.status != "FAIL");
}

TEST_CASE("coefficient bounds: constants pass, k ~ theta^3 fails on outer shells") {
    PolyconvexLaw<2> law(default_params());
    Rng rng(43);

    TransportCoeffs constant{CoeffKind::constant, 1e-2, 1e-2};
    CHECK(check_coeff_bounds<2>(constant, law, rng, CoeffBoundMode::adiabatic_limit).all_pass());
    CHECK(check_coeff_bounds<2>(constant, law, rng, CoeffBoundMode::zero_viscosity, 0.5)
              .all_pass());

    TransportCoeffs inv{CoeffKind::inv_theta, 1e-2, 1e-2};
    CHECK(check_coeff_bounds<2>(inv, law, rng, CoeffBoundMode::adiabatic_limit).all_pass());

    TransportCoeffs cubed{CoeffKind::theta_cubed, 1e-2, 1e-2};
    CHECK_FALSE(
        check_coeff_bounds<2>(cubed, law, rng, CoeffBoundMode::adiabatic_limit).all_pass());
}

TEST_CASE_TEMPLATE("theta recovery: monotone map, tight residual, failure mode", T,
                   std::integral_constant<int, 2>, std::integral_constant<int, 3>) {
    constexpr int D = T::value;
    for (ThermalKind kind : {ThermalKind::quadratic, ThermalKind::logarithmic}) {
        PolyconvexLaw<D> law(default_params(kind, 0.1));
        Rng rng(47);
        for (int i = 0; i < 100; ++i) {
            const PointState<D> u = sample_box<D>(rng);
            const double e = e_hat(law, u.xi, u.theta);
            // warm start
            const double th = recover_theta(law, u.xi, e, law.theta_guess(u.xi, e));
            CHECK(std::abs(e_hat(law, u.xi, th) - e) <= 1e-12 * std::max(1.0, std::abs(e)));
            CHECK(th == doctest::Approx(u.theta).epsilon(1e-9));
            // cold start from a bad guess
            const double th2 = recover_theta(law, u.xi, e, 7.3);
            CHECK(th2 == doctest::Approx(u.theta).epsilon(1e-9));
        }
        // energy below the minimal internal energy has no preimage
        const Minors<D> xi = minors_of(Mat<D>::identity());
        const double e_min = e_hat(law, xi, 1e-9);
        CHECK(std::isnan(recover_theta(law, xi, e_min - 1.0, 1.0)));
    }
}

TEST_CASE("transport coefficients stay positive for positive amplitudes") {
    Rng rng(53);
    for (CoeffKind kind : {CoeffKind::constant, CoeffKind::inv_theta, CoeffKind::theta_cubed}) {
        TransportCoeffs c{kind, 1e-3, 1e-3};
        for (int i = 0; i < 100; ++i) {
            const PointState<2> u = sample_box<2>(rng);
            CHECK(c.mu<2>(u.xi, u.theta) > 0.0);
            CHECK(c.k<2>(u.xi, u.theta) > 0.0);
        }
    }
}

TEST_CASE("domain errors on nonpositive temperature") {
    PolyconvexLaw<2> law(default_params());
    const Minors<2> xi = minors_of(Mat<2>::identity());
    CHECK_THROWS_AS(eta_hat(law, xi, 0.0), std::domain_error);
    CHECK_THROWS_AS(e_hat(law, xi, -1.0), std::domain_error);
    CHECK_THROWS_AS(piola_stress(law, Mat<2>::identity(), 0.0), std::domain_error);
}
