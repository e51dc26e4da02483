/// @file tensor.hpp
/// @brief Small dense d x d tensor algebra and the null-Lagrangian vector
///        (F, cof F, det F) with its exact F-derivatives.
///
/// Index convention: first index spatial (i), second referential (alpha),
/// stored row-major, so m(i,a) = data[i*D + a].

#ifndef POLYTHERM_TENSOR_HPP
#define POLYTHERM_TENSOR_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace polytherm {

template <int D>
struct Mat {
    static_assert(D == 2 || D == 3, "only d=2 and d=3 are supported");
    std::array<double, D * D> a{};

    double& operator()(int i, int al) { return a[i * D + al]; }
    double operator()(int i, int al) const { return a[i * D + al]; }

    static Mat identity() {
        Mat m;
        for (int i = 0; i < D; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat& operator+=(const Mat& o) {
        for (int k = 0; k < D * D; ++k) a[k] += o.a[k];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& x : a) x *= s;
        return *this;
    }

    friend Mat operator+(Mat l, const Mat& r) { return l += r; }
    friend Mat operator*(double s, Mat m) { return m *= s; }
    friend Mat operator-(Mat l, const Mat& r) {
        for (int k = 0; k < D * D; ++k) l.a[k] -= r.a[k];
        return l;
    }
};

template <int D>
using Vec = std::array<double, D>;

template <int D>
inline double frobenius2(const Mat<D>& m) {
    double s = 0.0;
    for (double x : m.a) s += x * x;
    return s;
}

template <int D>
inline double frobenius(const Mat<D>& m) {
    return std::sqrt(frobenius2(m));
}

template <int D>
inline double ddot(const Mat<D>& x, const Mat<D>& y) {
    double s = 0.0;
    for (int k = 0; k < D * D; ++k) s += x.a[k] * y.a[k];
    return s;
}

// Even and odd permutations of {0,1,2}; eps = +1 on the first row, -1 on the
// second. Explicit tables so the inner kernels stay branch-free.
inline constexpr int kPermEven[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
inline constexpr int kPermOdd[3][3] = {{0, 2, 1}, {2, 1, 0}, {1, 0, 2}};

/// eps_{ijk} for d=3 (0 off-permutation).
inline constexpr double eps3(int i, int j, int k) {
    return static_cast<double>((i - j) * (j - k) * (k - i)) * 0.5;
}

/// eps_{ij} for d=2.
inline constexpr double eps2(int i, int j) {
    return static_cast<double>(j - i);
}

/// Cofactor matrix. For d=3, (cof F)_{ia} = 1/2 eps_{ijk} eps_{abc} F_{jb} F_{kc};
/// for d=2 the adjugate-transpose analogue [[F22,-F21],[-F12,F11]], which is the
/// F-gradient of det F in both cases.
template <int D>
inline Mat<D> cofactor(const Mat<D>& f) {
    Mat<D> c;
    if constexpr (D == 2) {
        c(0, 0) = f(1, 1);
        c(0, 1) = -f(1, 0);
        c(1, 0) = -f(0, 1);
        c(1, 1) = f(0, 0);
    } else {
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            for (int al = 0; al < 3; ++al) {
                const int be = (al + 1) % 3, ga = (al + 2) % 3;
                c(i, al) = f(j, be) * f(k, ga) - f(j, ga) * f(k, be);
            }
        }
    }
    return c;
}

/// Determinant via the eps-expansion (explicit permutation sum for d=3).
template <int D>
inline double determinant(const Mat<D>& f) {
    if constexpr (D == 2) {
        return f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
    } else {
        double s = 0.0;
        for (int p = 0; p < 3; ++p)
            s += f(0, kPermEven[p][0]) * f(1, kPermEven[p][1]) * f(2, kPermEven[p][2]) -
                 f(0, kPermOdd[p][0]) * f(1, kPermOdd[p][1]) * f(2, kPermOdd[p][2]);
        return s;
    }
}

/// Null-Lagrangian (minors) vector: (F, cof F, det F) for d=3, (F, det F)
/// for d=2 where the cofactor is linear in F and carries no extra content.
template <int D>
struct Minors {
    static constexpr int kFDim = D * D;
    static constexpr int kZDim = (D == 3) ? 9 : 0;
    static constexpr int kDim = kFDim + kZDim + 1;

    std::array<double, kDim> a{};

    double& operator[](int b) { return a[b]; }
    double operator[](int b) const { return a[b]; }

    Mat<D> fmat() const {
        Mat<D> m;
        for (int k = 0; k < kFDim; ++k) m.a[k] = a[k];
        return m;
    }
    Mat<3> zmat() const requires(D == 3) {
        Mat<3> m;
        for (int k = 0; k < 9; ++k) m.a[k] = a[kFDim + k];
        return m;
    }
    double w() const { return a[kDim - 1]; }

    void set_f(const Mat<D>& m) {
        for (int k = 0; k < kFDim; ++k) a[k] = m.a[k];
    }
    void set_z(const Mat<3>& m) requires(D == 3) {
        for (int k = 0; k < 9; ++k) a[kFDim + k] = m.a[k];
    }
    void set_w(double v) { a[kDim - 1] = v; }

    Minors& operator+=(const Minors& o) {
        for (int k = 0; k < kDim; ++k) a[k] += o.a[k];
        return *this;
    }
    friend Minors operator-(Minors l, const Minors& r) {
        for (int k = 0; k < kDim; ++k) l.a[k] -= r.a[k];
        return l;
    }
};

template <int D>
using MinorsVec = std::array<double, Minors<D>::kDim>;

/// Phi(F): pack F, its cofactor (d=3) and determinant.
template <int D>
inline Minors<D> minors_of(const Mat<D>& f) {
    Minors<D> xi;
    xi.set_f(f);
    if constexpr (D == 3) xi.set_z(cofactor(f));
    xi.set_w(determinant(f));
    return xi;
}

/// Directional derivative dPhi/dF(F)[m]: the minors Jacobian applied to a
/// matrix direction. F-slot is the identity map, cof-slot is linear in F,
/// det-slot contracts with cof F.
template <int D>
inline Minors<D> apply_dminors(const Mat<D>& f, const Mat<D>& m) {
    Minors<D> out;
    out.set_f(m);
    if constexpr (D == 3) {
        Mat<3> z;
        // d(cof F)_{ia}/dF_{jb} = eps_{ijk} eps_{abc} F_{kc}
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            for (int al = 0; al < 3; ++al) {
                const int be = (al + 1) % 3, ga = (al + 2) % 3;
                z(i, al) = m(j, be) * f(k, ga) + f(j, be) * m(k, ga) -
                           m(j, ga) * f(k, be) - f(j, ga) * m(k, be);
            }
        }
        out.set_z(z);
    }
    out.set_w(ddot(cofactor(f), m));
    return out;
}

/// Transpose application: given a covector s on minors space, return the
/// matrix s_B dPhi^B/dF_{ia}(F). This is the chain-rule factor that turns
/// d(psi)/d(xi) into a Piola stress.
template <int D>
inline Mat<D> apply_dminors_t(const Mat<D>& f, const MinorsVec<D>& s) {
    Mat<D> out;
    for (int k = 0; k < D * D; ++k) out.a[k] = s[k];
    const Mat<D> cof = cofactor(f);
    const double sw = s[Minors<D>::kDim - 1];
    if constexpr (D == 3) {
        // cof-slot pull-back: sum_{kc} s_{kc} eps_{kij} ... rearranged as
        // (i,a) component of eps_{ijk} eps_{abc} s^z_{jb} F_{kc} summed over jb.
        for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3, k = (i + 2) % 3;
            for (int al = 0; al < 3; ++al) {
                const int be = (al + 1) % 3, ga = (al + 2) % 3;
                const auto sz = [&](int r, int c) { return s[9 + r * 3 + c]; };
                out(i, al) += sz(j, be) * f(k, ga) - sz(j, ga) * f(k, be) -
                              sz(k, be) * f(j, ga) + sz(k, ga) * f(j, be);
            }
        }
    }
    for (int k = 0; k < D * D; ++k) out.a[k] += sw * cof.a[k];
    return out;
}

/// Dense Jacobian dPhi^B/dF_{ia} as a (minors-dim) x (D*D) matrix, row B,
/// column ia. Convenience for tests and symmetrizer assembly.
template <int D>
inline std::array<MinorsVec<D>, D * D> dminors_columns(const Mat<D>& f) {
    std::array<MinorsVec<D>, D * D> cols{};
    for (int c = 0; c < D * D; ++c) {
        Mat<D> e;
        e.a[c] = 1.0;
        const Minors<D> de = apply_dminors(f, e);
        for (int b = 0; b < Minors<D>::kDim; ++b) cols[c][b] = de[b];
    }
    return cols;
}

}  // namespace polytherm

#endif  // POLYTHERM_TENSOR_HPP
