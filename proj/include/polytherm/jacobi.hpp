/// @file jacobi.hpp
/// @brief Cyclic Jacobi eigenvalues for small dense symmetric matrices.

#ifndef POLYTHERM_JACOBI_HPP
#define POLYTHERM_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <vector>

namespace polytherm {

/// Eigenvalues of a symmetric n x n matrix (row-major), ascending.
/// Deterministic cyclic sweeps; fine for the n <= 23 matrices used here.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    auto at = [&a, n](int r, int c) -> double& { return a[r * n + c]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int k = 0; k < n; ++k) ev[k] = at(k, k);
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace polytherm

#endif  // POLYTHERM_JACOBI_HPP
