/// @file grid.hpp
/// @brief Periodic torus grid, scalar fields, and deterministic reductions.

#ifndef POLYTHERM_GRID_HPP
#define POLYTHERM_GRID_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace polytherm {

using Field = std::vector<double>;

template <int D>
struct Grid {
    int n = 0;          // cells per axis
    double length = 1;  // torus side L
    double h = 0;       // spacing L/n

    Grid() = default;
    Grid(int n_, double length_) : n(n_), length(length_), h(length_ / n_) {
        if (n_ < 8) throw std::invalid_argument("grid: need at least 8 cells per axis");
    }

    std::int64_t cells() const {
        std::int64_t c = 1;
        for (int k = 0; k < D; ++k) c *= n;
        return c;
    }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }

    // Linear index of the cell shifted by +/-1 along one axis, with periodic wrap.
    std::int64_t shift(std::int64_t c, int axis, int step) const {
        std::int64_t stride = 1;
        for (int k = 0; k < axis; ++k) stride *= n;
        const std::int64_t coord = (c / stride) % n;
        std::int64_t nc = coord + step;
        if (nc < 0) nc += n;
        if (nc >= n) nc -= n;
        return c + (nc - coord) * stride;
    }

    // Physical coordinate of a cell center axis component (cell k at k*h).
    double coord(std::int64_t c, int axis) const {
        std::int64_t stride = 1;
        for (int k = 0; k < axis; ++k) stride *= n;
        return static_cast<double>((c / stride) % n) * h;
    }
};

/// Central difference along one axis: (f[c+e] - f[c-e]) / (2h).
template <int D>
inline double central_diff(const Grid<D>& g, const Field& f, std::int64_t c, int axis) {
    return (f[g.shift(c, axis, +1)] - f[g.shift(c, axis, -1)]) / (2.0 * g.h);
}

namespace detail {
inline constexpr int kSumChunks = 64;
}

// Deterministic parallel reductions: a fixed number of chunks combined in
// index order, so results are byte-identical regardless of thread count.

template <class Fn>
double deterministic_sum(std::int64_t count, Fn&& fn) {
    double partial[detail::kSumChunks] = {};
    const std::int64_t chunk = (count + detail::kSumChunks - 1) / detail::kSumChunks;
#pragma omp parallel for schedule(static)
    for (int b = 0; b < detail::kSumChunks; ++b) {
        const std::int64_t lo = b * chunk;
        const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += fn(i);
        partial[b] = s;
    }
    double total = 0.0;
    for (int b = 0; b < detail::kSumChunks; ++b) total += partial[b];
    return total;
}

template <class Fn>
double deterministic_max(std::int64_t count, Fn&& fn) {
    double partial[detail::kSumChunks] = {};
    const std::int64_t chunk = (count + detail::kSumChunks - 1) / detail::kSumChunks;
#pragma omp parallel for schedule(static)
    for (int b = 0; b < detail::kSumChunks; ++b) {
        const std::int64_t lo = b * chunk;
        const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
        double m = -1e300;
        for (std::int64_t i = lo; i < hi; ++i) m = std::max(m, fn(i));
        partial[b] = m;
    }
    double total = -1e300;
    for (int b = 0; b < detail::kSumChunks; ++b) total = std::max(total, partial[b]);
    return total;
}

/// Integral over the torus. On a periodic uniform grid the trapezoid rule
/// coincides with the plain cell-average times |T|^d and is spectrally
/// accurate for smooth fields.
template <int D, class Fn>
double integrate(const Grid<D>& g, Fn&& fn) {
    const double cellvol = [&] {
        double v = 1.0;
        for (int k = 0; k < D; ++k) v *= g.h;
        return v;
    }();
    return cellvol * deterministic_sum(g.cells(), fn);
}

}  // namespace polytherm

#endif  // POLYTHERM_GRID_HPP
