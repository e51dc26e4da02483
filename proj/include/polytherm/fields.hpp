/// @file fields.hpp
/// @brief Primitive grid fields (xi, v, theta) and stored trajectories.

#ifndef POLYTHERM_FIELDS_HPP
#define POLYTHERM_FIELDS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polytherm/augmented.hpp"
#include "polytherm/grid.hpp"
#include "polytherm/tensor.hpp"

namespace polytherm {

/// One snapshot of the primitive fields on a grid. Component order is
/// (xi^1..xi^kXi, v_1..v_d, theta).
template <int D>
struct FrameFields {
    static constexpr int kXi = Minors<D>::kDim;
    static constexpr int kComps = state_dim<D>();

    std::vector<Field> c;

    FrameFields() = default;
    explicit FrameFields(const Grid<D>& g) { allocate(g); }

    void allocate(const Grid<D>& g) {
        c.assign(kComps, Field(g.cells(), 0.0));
    }

    Field& xi(int b) { return c[b]; }
    const Field& xi(int b) const { return c[b]; }
    Field& v(int i) { return c[kXi + i]; }
    const Field& v(int i) const { return c[kXi + i]; }
    Field& theta() { return c[kXi + D]; }
    const Field& theta() const { return c[kXi + D]; }

    PointState<D> at(std::int64_t cell) const {
        PointState<D> u;
        for (int b = 0; b < kXi; ++b) u.xi[b] = c[b][cell];
        for (int i = 0; i < D; ++i) u.v[i] = c[kXi + i][cell];
        u.theta = c[kXi + D][cell];
        return u;
    }

    void set(std::int64_t cell, const PointState<D>& u) {
        for (int b = 0; b < kXi; ++b) c[b][cell] = u.xi[b];
        for (int i = 0; i < D; ++i) c[kXi + i][cell] = u.v[i];
        c[kXi + D][cell] = u.theta;
    }
};

/// Frames of a run at (uniform) frame spacing, in primitive variables.
template <int D>
struct Trajectory {
    Grid<D> grid;
    std::vector<double> times;
    std::vector<FrameFields<D>> frames;

    void require_matches(const Trajectory& o) const {
        if (!(grid == o.grid)) throw std::invalid_argument("trajectory: grid mismatch");
        if (times.size() != o.times.size())
            throw std::invalid_argument("trajectory: time axis mismatch");
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::abs(times[i] - o.times[i]) > 1e-12 * (1.0 + std::abs(times[i])))
                throw std::invalid_argument("trajectory: time axis mismatch");
    }
};

}  // namespace polytherm

#endif  // POLYTHERM_FIELDS_HPP
