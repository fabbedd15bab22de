#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace royden;
using testutil::annulus_ctx;
using testutil::random_field;

TEST_CASE("gauge axioms hold for the built-in kinds") {
    const DomainContext& ctx = annulus_ctx();
    for (double p : {1.0, 2.0, 3.0}) {
        GaugeAxiomReport rep = check_gauge_axioms(GaugeNormSpec::p_norm(p),
                                                  ctx.density, ctx.sampling);
        REQUIRE(rep.passed);
        REQUIRE(rep.alpha_one == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(rep.dominating_margin >= -1e-12);
    }
    // the sup norm assigns every arc gauge 1, so it fails the continuity axiom
    REQUIRE_THROWS_AS(
        check_gauge_axioms(GaugeNormSpec::p_norm(std::numeric_limits<double>::infinity()),
                           ctx.density, ctx.sampling),
        AxiomViolation);
    GaugeNormSpec mx = GaugeNormSpec::max_combination({{1.0, 1.0}, {0.5, 2.0}});
    REQUIRE(check_gauge_axioms(mx, ctx.density, ctx.sampling).passed);
    // alpha(1) != 1 violates normalization
    GaugeNormSpec bad = GaugeNormSpec::max_combination({{2.0, 2.0}});
    REQUIRE_THROWS_AS(check_gauge_axioms(bad, ctx.density, ctx.sampling), AxiomViolation);
}

TEST_CASE("p-norm evaluation agrees with direct quadrature") {
    const DomainContext& ctx = annulus_ctx();
    BoundaryField f = random_field(ctx.sampling, 11);
    BoundaryField f2(f.components(), f.per_component());
    for (int j = 0; j < f.components(); ++j)
        for (int k = 0; k < f.per_component(); ++k)
            f2.at(j, k) = std::norm(f.at(j, k));
    double direct = std::sqrt(integrate_omega(f2, ctx.density, ctx.sampling).real());
    REQUIRE(gauge_eval(GaugeNormSpec::p_norm(2.0), f, ctx.density, ctx.sampling) ==
            Catch::Approx(direct).epsilon(1e-12));
}

TEST_CASE("p-norms are monotone in p on a probability measure") {
    const DomainContext& ctx = annulus_ctx();
    for (unsigned seed : {1u, 2u, 3u}) {
        BoundaryField f = random_field(ctx.sampling, seed);
        double prev = 0.0;
        for (double p : {1.0, 1.5, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
            double a = gauge_eval(GaugeNormSpec::p_norm(p), f, ctx.density, ctx.sampling);
            REQUIRE(a >= prev - 1e-12);
            prev = a;
        }
    }
}

TEST_CASE("dual of a p-norm is the q-norm; pairing obeys Holder") {
    const DomainContext& ctx = annulus_ctx();
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        GaugeNormSpec spec = GaugeNormSpec::p_norm(p);
        double q = (p == 1.0) ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
        for (unsigned seed : {5u, 6u}) {
            BoundaryField f = random_field(ctx.sampling, seed);
            REQUIRE(dual_norm(spec, f, ctx.density, ctx.sampling) ==
                    Catch::Approx(gauge_eval(GaugeNormSpec::p_norm(q), f, ctx.density,
                                             ctx.sampling))
                        .epsilon(1e-12));
        }
    }
    // Holder: |int f g domega| <= alpha(f) alpha'(g)
    for (unsigned seed = 20; seed < 30; ++seed) {
        BoundaryField f = random_field(ctx.sampling, seed);
        BoundaryField g = random_field(ctx.sampling, seed + 100);
        BoundaryField prod(f.components(), f.per_component());
        for (int j = 0; j < f.components(); ++j)
            for (int k = 0; k < f.per_component(); ++k)
                prod.at(j, k) = f.at(j, k) * g.at(j, k);
        double pairing = std::abs(integrate_omega(prod, ctx.density, ctx.sampling));
        for (double p : {1.0, 2.0, 3.0}) {
            GaugeNormSpec spec = GaugeNormSpec::p_norm(p);
            double bound = gauge_eval(spec, f, ctx.density, ctx.sampling) *
                           dual_norm(spec, g, ctx.density, ctx.sampling);
            REQUIRE(pairing <= bound + 1e-9);
        }
    }
}

TEST_CASE("dual of a max combination brackets correctly") {
    const DomainContext& ctx = annulus_ctx();
    GaugeNormSpec mx = GaugeNormSpec::max_combination({{1.0, 1.0}, {0.7, 2.0}});
    for (unsigned seed : {41u, 42u}) {
        BoundaryField f = random_field(ctx.sampling, seed);
        double d = dual_norm(mx, f, ctx.density, ctx.sampling);
        // alpha >= each weighted term, so alpha' <= each scaled dual term
        double upper = std::min(
            gauge_eval(GaugeNormSpec::p_norm(std::numeric_limits<double>::infinity()), f,
                       ctx.density, ctx.sampling) /
                1.0,
            gauge_eval(GaugeNormSpec::p_norm(2.0), f, ctx.density, ctx.sampling) / 0.7);
        REQUIRE(d <= upper + 1e-9);
        // feasible h = 1/alpha(1-ish): pairing with normalized |f| sign pattern
        BoundaryField ones(f.components(), f.per_component());
        for (auto& row : ones.values)
            for (auto& v : row) v = 1.0;
        double a1 = gauge_eval(mx, ones, ctx.density, ctx.sampling);
        BoundaryField absf(f.components(), f.per_component());
        for (int j = 0; j < f.components(); ++j)
            for (int k = 0; k < f.per_component(); ++k)
                absf.at(j, k) = std::abs(f.at(j, k));
        double lower = integrate_omega(absf, ctx.density, ctx.sampling).real() / a1;
        REQUIRE(d >= lower - 1e-9);
    }
}

TEST_CASE("H-alpha membership reports the gauge norm") {
    const DomainContext& ctx = annulus_ctx();
    AnalyticRep f = corpus_function("w-2", ctx);
    auto [member, norm] = h_alpha_membership(f, GaugeNormSpec::p_norm(2.0), ctx.density,
                                             ctx.sampling);
    REQUIRE(member);
    REQUIRE(norm > 1.0);  // |w-2| >= 1 on the annulus boundary
}
