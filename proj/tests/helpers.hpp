#ifndef ROYDEN_TESTS_HELPERS_HPP
#define ROYDEN_TESTS_HELPERS_HPP

#include <random>

#include "royden/royden.hpp"

namespace testutil {

using royden::Complex;

// A(0.5, 1) with base point sqrt(0.5): the workhorse domain. Cached contexts
// because building one runs the full measure/unit/period pipeline.
inline royden::CircularDomain annulus() {
    return royden::CircularDomain({{0.0, 0.0}, 1.0}, {{{0.0, 0.0}, 0.5}},
                                  Complex(std::sqrt(0.5), 0.0));
}

inline royden::CircularDomain two_hole() {
    return royden::CircularDomain(
        {{0.0, 0.0}, 1.0},
        {{{0.4, 0.0}, 0.15}, {{-0.4, 0.0}, 0.15}},
        Complex(0.0, 0.0));
}

inline const royden::DomainContext& annulus_ctx() {
    static royden::DomainContext ctx = royden::DomainContext::build(annulus(), 128, 24);
    return ctx;
}

inline const royden::DomainContext& two_hole_ctx() {
    static royden::DomainContext ctx = royden::DomainContext::build(two_hole(), 128, 24);
    return ctx;
}

/// Random smooth boundary data with a fixed seed.
inline royden::BoundaryField random_field(const royden::BoundarySampling& s, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    royden::BoundaryField f(s.components(), s.per_component());
    for (auto& row : f.values)
        for (auto& v : row) v = Complex(unif(rng), unif(rng));
    return f;
}

}  // namespace testutil

#endif
