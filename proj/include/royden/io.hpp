#ifndef ROYDEN_IO_HPP
#define ROYDEN_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "royden/hardy.hpp"

namespace royden {

struct IoError : ConfigError { using ConfigError::ConfigError; };
struct ManifestError : ConfigError { using ConfigError::ConfigError; };

using Json = nlohmann::ordered_json;

/// Floats in reports carry 17 significant digits (round-trip exact).
inline std::string format_float(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Complex parse_point(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ManifestError(std::string(what) + ": expected [x, y]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Circle parse_circle(const Json& j, const char* what) {
    if (!j.is_object() || !j.contains("center") || !j.contains("radius"))
        throw ManifestError(std::string(what) + ": expected {center, radius}");
    return Circle{parse_point(j.at("center"), what), j.at("radius").get<double>()};
}

/// Domain config:
///   {"outer": {"center": [x,y], "radius": r},
///    "holes": [{"center": [x,y], "radius": r}, ...],
///    "base_point": [x,y]}
inline CircularDomain parse_domain(const Json& j) {
    if (!j.is_object() || !j.contains("outer") || !j.contains("base_point"))
        throw ManifestError("domain config: expected {outer, holes, base_point}");
    std::vector<Circle> holes;
    if (j.contains("holes"))
        for (const auto& h : j.at("holes")) holes.push_back(parse_circle(h, "hole"));
    return CircularDomain(parse_circle(j.at("outer"), "outer"), std::move(holes),
                          parse_point(j.at("base_point"), "base_point"));
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(path + ": " + e.what());
    }
    return j;
}

/// Gauge spec: {"kind": "p", "p": 2} with "p" possibly the string "inf", or
/// {"kind": "max", "terms": [[weight, p], ...]}.
inline GaugeNormSpec parse_gauge(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ManifestError("gauge spec: expected {kind, ...}");
    auto read_p = [](const Json& v) -> double {
        if (v.is_string() && v.get<std::string>() == "inf")
            return std::numeric_limits<double>::infinity();
        if (!v.is_number()) throw ManifestError("gauge spec: p must be a number or \"inf\"");
        double p = v.get<double>();
        if (p < 1.0) throw ManifestError("gauge spec: p must be >= 1");
        return p;
    };
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "p") return GaugeNormSpec::p_norm(read_p(j.at("p")));
    if (kind == "max") {
        std::vector<std::pair<double, double>> terms;
        for (const auto& t : j.at("terms")) {
            if (!t.is_array() || t.size() != 2)
                throw ManifestError("gauge spec: each term must be [weight, p]");
            terms.emplace_back(t[0].get<double>(), read_p(t[1]));
        }
        if (terms.empty()) throw ManifestError("gauge spec: max kind needs terms");
        return GaugeNormSpec::max_combination(std::move(terms));
    }
    throw ManifestError("gauge spec: unknown kind '" + kind + "'");
}

/// Boundary-field CSV: header then rows `component,angle,re,im`, node order.
inline void write_csv_field(std::ostream& out, const BoundaryField& f,
                            const BoundarySampling& s) {
    require_shape(f, s);
    out << "component,angle,re,im\n";
    for (int j = 0; j < s.components(); ++j)
        for (int k = 0; k < s.per_component(); ++k)
            out << j << ',' << format_float(s.angle(k)) << ','
                << format_float(f.at(j, k).real()) << ','
                << format_float(f.at(j, k).imag()) << '\n';
}

inline void write_csv_field(const std::string& path, const BoundaryField& f,
                            const BoundarySampling& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_csv_field(out, f, s);
}

inline BoundaryField read_csv_field(std::istream& in, const BoundarySampling& s) {
    BoundaryField f(s.components(), s.per_component());
    std::string line;
    if (!std::getline(in, line)) throw IoError("boundary CSV: missing header");
    std::vector<std::vector<int>> seen(static_cast<std::size_t>(s.components()));
    int count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(row, cell, ',')) throw IoError("boundary CSV: short row");
            vals[c] = std::stod(cell);
        }
        int j = static_cast<int>(vals[0]);
        int k = static_cast<int>(std::lround(vals[1] / (two_pi / s.per_component())));
        if (j < 0 || j >= s.components() || k < 0 || k >= s.per_component())
            throw IoError("boundary CSV: node outside sampling layout");
        f.at(j, k) = Complex(vals[2], vals[3]);
        ++count;
    }
    if (count != s.total_nodes())
        throw IoError("boundary CSV: row count does not match sampling");
    return f;
}

/// Corpus tags name test functions symbolically. Grammar: factors joined by
/// '*', each one of
///   1 | w | w^N (N possibly negative) | w-<a> | w+<a> | exp(w/<a>) |
///   zbi (simple zero at the base point) | zbi:<x>,<y>
/// Parenthesized factors are allowed, e.g. "w*(w-2)".
inline AnalyticRep corpus_function(const std::string& tag, const DomainContext& ctx) {
    std::vector<std::string> factors;
    std::string cur;
    int depth = 0;
    for (char ch : tag) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == '*' && depth == 0) {
            factors.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    factors.push_back(cur);

    auto field = BoundaryField::sample(ctx.sampling, [](Complex) { return Complex(1.0); });
    auto apply = [&](const std::function<Complex(Complex)>& g) {
        for (int j = 0; j < ctx.sampling.components(); ++j)
            for (int k = 0; k < ctx.sampling.per_component(); ++k)
                field.at(j, k) *= g(ctx.sampling.node(j, k));
    };

    for (std::string f : factors) {
        while (f.size() >= 2 && f.front() == '(' && f.back() == ')')
            f = f.substr(1, f.size() - 2);
        if (f.empty()) throw ManifestError("corpus tag '" + tag + "': empty factor");
        try {
            if (f == "1") {
                // multiplicative identity
            } else if (f == "w") {
                apply([](Complex w) { return w; });
            } else if (f.rfind("w^", 0) == 0) {
                int n = std::stoi(f.substr(2));
                apply([n](Complex w) { return std::pow(w, n); });
            } else if (f.rfind("exp(w/", 0) == 0 && f.back() == ')') {
                double a = std::stod(f.substr(6, f.size() - 7));
                apply([a](Complex w) { return std::exp(w / a); });
            } else if (f == "zbi") {
                AnalyticRep z = zero_based_inner({{ctx.domain.base_point(), 1}}, ctx);
                apply([z](Complex w) { return z.value(w); });
            } else if (f.rfind("zbi:", 0) == 0) {
                std::string pt = f.substr(4);
                auto comma = pt.find(',');
                if (comma == std::string::npos)
                    throw ManifestError("corpus tag: zbi wants zbi:<x>,<y>");
                Complex z0(std::stod(pt.substr(0, comma)), std::stod(pt.substr(comma + 1)));
                AnalyticRep z = zero_based_inner({{z0, 1}}, ctx);
                apply([z](Complex w) { return z.value(w); });
            } else if ((f[0] == 'w') && f.size() > 1 && (f[1] == '-' || f[1] == '+')) {
                double a = std::stod(f.substr(2));
                if (f[1] == '-') a = -a;
                apply([a](Complex w) { return w + a; });
            } else {
                throw ManifestError("corpus tag: unknown factor '" + f + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ManifestError("corpus tag: cannot parse factor '" + f + "'");
        }
    }
    return fit_analytic_within(ctx.domain, ctx.sampling, field, ctx.K, 1e-12);
}

}  // namespace royden

#endif
