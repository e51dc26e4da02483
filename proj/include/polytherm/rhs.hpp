/// @file rhs.hpp
/// @brief Semidiscrete right-hand side of the augmented system on the torus:
///        centered conservative flux divergence, conservative-form viscous and
///        conduction terms, optional fourth-order hyperviscosity for the
///        adiabatic variant, and a heat-supply source.
///
/// Two implementations share this interface: an OpenMP kernel path used by
/// the solver, and a plain serial reference path built from the pointwise
/// assembly, kept for testing and benchmarked against the kernels.

#ifndef POLYTHERM_RHS_HPP
#define POLYTHERM_RHS_HPP

#include <vector>

#include "polytherm/fields.hpp"
#include "polytherm/identity.hpp"
#include "polytherm/law.hpp"

namespace polytherm {

/// Conserved layout mirrors the primitive one with the energy density
/// |v|^2/2 + e in the temperature slot.
template <int D>
struct SemiDiscrete {
    Grid<D> grid;
    const FreeEnergy<D>* law = nullptr;
    TransportCoeffs coeffs;
    double hyperviscosity = 0.0;  // eps_h; applied as -eps_h h^3 lap(lap A)
    HeatSupplyFn<D> heat_supply;
};

/// Safeguarded Newton (with bisection fallback) for the monotone map
/// theta -> e_hat(xi, theta). Returns NaN when the energy sits below the
/// minimal internal energy of the law at xi. On success the residual
/// satisfies |e_hat(xi,theta) - e| <= 1e-12 max(1, |e|).
template <int D>
double recover_theta(const FreeEnergy<D>& law, const Minors<D>& xi, double e_internal,
                     double guess);

template <int D>
bool eval_rhs_parallel(const SemiDiscrete<D>& ops, const std::vector<Field>& a, double t,
                       std::vector<Field>& rhs, Field& theta_cache);

/// Serial reference: same semidiscrete operator, evaluated cell by cell from
/// the pointwise augmented assembly with no caching or loop fusion.
template <int D>
bool eval_rhs_reference(const SemiDiscrete<D>& ops, const std::vector<Field>& a, double t,
                        std::vector<Field>& rhs, Field& theta_cache);

}  // namespace polytherm

#endif  // POLYTHERM_RHS_HPP
