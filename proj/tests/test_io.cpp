#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "helpers.hpp"

using namespace royden;
using testutil::annulus_ctx;

TEST_CASE("domain config parsing") {
    Json j = Json::parse(R"({
      "outer": {"center": [0.0, 0.0], "radius": 1.0},
      "holes": [{"center": [0.0, 0.0], "radius": 0.5}],
      "base_point": [0.7, 0.0]})");
    CircularDomain dom = parse_domain(j);
    REQUIRE(dom.num_holes() == 1);
    REQUIRE(dom.outer().radius == 1.0);
    REQUIRE(dom.base_point() == Complex(0.7, 0.0));

    REQUIRE_THROWS_AS(parse_domain(Json::parse(R"({"outer": 3})")), ManifestError);
    REQUIRE_THROWS_AS(parse_domain(Json::parse(
                          R"({"outer": {"center": [0,0], "radius": 1}, "base_point": [1]})")),
                      ManifestError);
    // geometry errors surface from the constructor, not the parser
    REQUIRE_THROWS_AS(parse_domain(Json::parse(
                          R"({"outer": {"center": [0,0], "radius": 1.0},
                              "holes": [{"center": [0.8,0], "radius": 0.5}],
                              "base_point": [-0.5,0]})")),
                      ContainmentError);
}

TEST_CASE("gauge spec parsing") {
    GaugeNormSpec p2 = parse_gauge(Json::parse(R"({"kind": "p", "p": 2})"));
    REQUIRE(p2.kind == GaugeNormSpec::Kind::p_norm);
    REQUIRE(p2.p == 2.0);
    GaugeNormSpec pi = parse_gauge(Json::parse(R"({"kind": "p", "p": "inf"})"));
    REQUIRE(std::isinf(pi.p));
    GaugeNormSpec mx =
        parse_gauge(Json::parse(R"({"kind": "max", "terms": [[1.0, 1], [0.5, "inf"]]})"));
    REQUIRE(mx.terms.size() == 2);
    REQUIRE_THROWS_AS(parse_gauge(Json::parse(R"({"kind": "p", "p": 0.5})")), ManifestError);
    REQUIRE_THROWS_AS(parse_gauge(Json::parse(R"({"kind": "weird"})")), ManifestError);
    REQUIRE_THROWS_AS(parse_gauge(Json::parse(R"({"kind": "max", "terms": []})")),
                      ManifestError);
}

TEST_CASE("boundary CSV round trip") {
    const DomainContext& ctx = annulus_ctx();
    BoundaryField f = testutil::random_field(ctx.sampling, 99);
    std::stringstream buf;
    write_csv_field(buf, f, ctx.sampling);
    std::string header;
    std::getline(buf, header);
    REQUIRE(header == "component,angle,re,im");
    buf.seekg(0);
    BoundaryField g = read_csv_field(buf, ctx.sampling);
    for (int j = 0; j < f.components(); ++j)
        for (int k = 0; k < f.per_component(); ++k)
            REQUIRE(std::abs(f.at(j, k) - g.at(j, k)) == 0.0);  // 17 digits round-trip

    std::stringstream empty("component,angle,re,im\n");
    REQUIRE_THROWS_AS(read_csv_field(empty, ctx.sampling), IoError);
}

TEST_CASE("float formatting keeps 17 significant digits") {
    double x = 0.1234567890123456789;
    REQUIRE(std::stod(format_float(x)) == x);
    REQUIRE(std::stod(format_float(two_pi)) == two_pi);
}

TEST_CASE("corpus tags evaluate to the functions they name") {
    const DomainContext& ctx = annulus_ctx();
    Complex w(0.8, 0.2);
    REQUIRE(std::abs(corpus_function("1", ctx).value(w) - 1.0) < 1e-10);
    REQUIRE(std::abs(corpus_function("w", ctx).value(w) - w) < 1e-10);
    REQUIRE(std::abs(corpus_function("w^-2", ctx).value(w) - 1.0 / (w * w)) < 1e-9);
    REQUIRE(std::abs(corpus_function("w-2", ctx).value(w) - (w - 2.0)) < 1e-10);
    REQUIRE(std::abs(corpus_function("exp(w/3)", ctx).value(w) - std::exp(w / 3.0)) < 1e-10);
    REQUIRE(std::abs(corpus_function("w*(w-2)", ctx).value(w) - w * (w - 2.0)) < 1e-9);
    // zbi with an explicit zero location
    AnalyticRep z = corpus_function("zbi:0.7,0.0", ctx);
    REQUIRE(std::abs(z.value(Complex(0.7, 0.0))) < 1e-8);
    REQUIRE_THROWS_AS(corpus_function("sin(w)", ctx), ManifestError);
    REQUIRE_THROWS_AS(corpus_function("w**2", ctx), ManifestError);
}
