#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace royden;
using testutil::annulus;
using testutil::annulus_ctx;
using testutil::two_hole;

namespace {
const double rho = 0.5;  // annulus inner radius
}

TEST_CASE("dirichlet solve reproduces a known harmonic extension") {
    CircularDomain dom = annulus();
    BoundarySampling s(dom, 64);
    // u = Re(w) + Re(0.3/w) is harmonic in the annulus; feed its trace back in
    auto exact = [](Complex w) { return w.real() + (0.3 / w).real(); };
    BoundaryField data = BoundaryField::sample(s, [&](Complex w) { return Complex(exact(w)); });
    HarmonicRep u = solve_dirichlet(dom, s, data, 12);
    REQUIRE(u.residual < 1e-12);
    for (Complex w : {Complex(0.8, 0.1), Complex(-0.6, 0.2), Complex(0.0, 0.7)})
        REQUIRE(evaluate_harmonic(u, w) == Catch::Approx(exact(w)).margin(1e-11));
    REQUIRE_THROWS_AS(evaluate_harmonic(u, Complex(0.1, 0.0)), DomainError);
}

TEST_CASE("dirichlet solve flags unresolvable data") {
    CircularDomain dom = annulus();
    BoundarySampling s(dom, 64);
    BoundaryField data = BoundaryField::sample(s, [](Complex w) {
        return Complex(std::pow(w / std::abs(w), 20).real());  // 20th harmonic
    });
    REQUIRE_THROWS_AS(solve_dirichlet(dom, s, data, 4), ResidualError);
    // the adaptive variant raises the truncation instead
    HarmonicRep u = solve_dirichlet_within(dom, s, data, 4);
    REQUIRE(u.residual < 1e-8);
}

TEST_CASE("harmonic units interpolate the component indicators") {
    const DomainContext& ctx = annulus_ctx();
    REQUIRE(ctx.units.size() == 1);
    // closed form h_1 = log|w| / log(rho)
    for (Complex w : {Complex(0.6, 0.0), Complex(0.0, -0.9), Complex(0.55, 0.55)})
        REQUIRE(ctx.units[0].value(w) ==
                Catch::Approx(std::log(std::abs(w)) / std::log(rho)).margin(1e-10));
}

TEST_CASE("harmonic measure: density, mass, mean value") {
    const DomainContext& ctx = annulus_ctx();
    REQUIRE(ctx.density.mass == Catch::Approx(1.0).margin(1e-10));
    for (const auto& row : ctx.density.density.values)
        for (const auto& v : row) REQUIRE(v.real() > 0.0);

    // reproducing property: int u domega = u(base) for a harmonic probe
    HarmonicRep u(ctx.domain, 3);
    u.constant = 0.4;
    u.outer_coeffs[0] = Complex(0.7, -0.2);
    u.outer_coeffs[2] = Complex(-0.1, 0.3);
    u.hole_coeffs[0][1] = Complex(0.25, 0.15);
    u.log_coeffs[0] = 0.6;
    BoundaryField tr = BoundaryField::sample(ctx.sampling,
                                             [&](Complex w) { return Complex(u.value(w)); });
    REQUIRE(integrate_omega(tr, ctx.density, ctx.sampling).real() ==
            Catch::Approx(u.value(ctx.domain.base_point())).margin(1e-9));
}

TEST_CASE("off-center disk density matches the Poisson kernel") {
    CircularDomain disk({{0, 0}, 1.0}, {}, Complex(0.3, 0.0));
    BoundarySampling s(disk, 128);
    OmegaDensity d = harmonic_measure_density(disk, s, 16);
    Complex a(0.3, 0.0);
    for (int k = 0; k < s.per_component(); ++k) {
        Complex w = s.node(0, k);
        double poisson = (1.0 - std::norm(a)) / std::norm(w - a) / two_pi;
        REQUIRE(d.density.at(0, k).real() == Catch::Approx(poisson).margin(1e-10));
    }
}

TEST_CASE("green's function: sign, boundary values, symmetry") {
    CircularDomain dom = annulus();
    BoundarySampling s(dom, 128);
    Complex p1(0.7, 0.0), p2(-0.2, 0.65);
    GreensFunction g1 = greens_function(dom, s, p1, 16);
    GreensFunction g2 = greens_function(dom, s, p2, 16);
    REQUIRE(g1.value(p2) > 0.0);
    REQUIRE(std::abs(g1.value(Complex(0.999, 0.0))) < 1e-2);
    REQUIRE(g1.value(p2) == Catch::Approx(g2.value(p1)).margin(1e-8));
    REQUIRE_THROWS_AS(greens_function(dom, s, Complex(0.2, 0.0), 16), DomainError);
}

TEST_CASE("periods anchor to the log coefficients") {
    CircularDomain dom = annulus();
    BoundarySampling s(dom, 64);
    BoundaryField data = BoundaryField::sample(
        s, [](Complex w) { return Complex(std::log(std::abs(w))); });
    HarmonicRep u = solve_dirichlet(dom, s, data, 8);
    REQUIRE(u.log_coeffs[0] == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(period(u, 1, s) == Catch::Approx(two_pi).margin(1e-10));
    REQUIRE_THROWS_AS(period(u, 2, s), ShapeError);
}

TEST_CASE("annulus period matrix has the closed-form entry") {
    const DomainContext& ctx = annulus_ctx();
    REQUIRE(ctx.periods.p(0, 0) == Catch::Approx(two_pi / std::log(rho)).margin(1e-8));
    REQUIRE(ctx.periods.symmetry_defect < 1e-12);
    REQUIRE(ctx.periods.min_singular_value > 1.0);
}

TEST_CASE("two-hole period matrix: symmetry of the matrix and of the geometry") {
    const DomainContext& ctx = testutil::two_hole_ctx();
    REQUIRE(ctx.periods.p.rows() == 2);
    REQUIRE(ctx.periods.symmetry_defect < 1e-8);
    REQUIRE(ctx.periods.min_singular_value > 0.0);
    // mirror-symmetric holes => equal diagonal entries
    REQUIRE(ctx.periods.p(0, 0) == Catch::Approx(ctx.periods.p(1, 1)).margin(1e-8));
}

TEST_CASE("conjugation correction removes all periods") {
    const DomainContext& ctx = annulus_ctx();
    BoundaryField data = BoundaryField::sample(
        ctx.sampling, [](Complex w) { return Complex(std::log(std::abs(w))); });
    HarmonicRep u = solve_dirichlet(ctx.domain, ctx.sampling, data, 8);
    HarmonicUnit a = conjugation_correction(u, ctx.periods, ctx.sampling);
    REQUIRE(a.a.size() == 1);
    REQUIRE(a.a[0] == Catch::Approx(std::log(2.0)).margin(1e-9));
    HarmonicRep corrected = apply_unit(u, a, ctx.units);
    REQUIRE(std::abs(period(corrected, 1, ctx.sampling)) < 1e-8);
}

TEST_CASE("analytic completion") {
    const DomainContext& ctx = annulus_ctx();
    BoundaryField data = BoundaryField::sample(
        ctx.sampling, [](Complex w) { return Complex(w.real() + (0.3 / w).real()); });
    HarmonicRep u = solve_dirichlet(ctx.domain, ctx.sampling, data, 12);
    AnalyticRep f = analytic_completion(u);
    // Re f = u and Im f vanishes at the (real) base point, so f = w + 0.3/w
    for (Complex w : {Complex(0.8, 0.1), Complex(0.0, -0.7)})
        REQUIRE(std::abs(f.value(w) - (w + 0.3 / w)) < 1e-10);
    // a harmonic unit has a period and cannot be completed
    REQUIRE_THROWS_AS(analytic_completion(ctx.units[0]), NonzeroPeriodError);
}

TEST_CASE("Q functions integrate to zero against omega") {
    for (const DomainContext* ctx : {&annulus_ctx(), &testutil::two_hole_ctx()})
        for (const auto& q : ctx->q_fields)
            REQUIRE(std::abs(integrate_omega(q, ctx->density, ctx->sampling)) < 1e-8);
}
