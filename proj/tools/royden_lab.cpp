// royden-lab: batch driver for the Hardy-space toolkit. One manifest = one
// experiment; a manifest file may also hold {"entries": [...]} which run
// independently (optionally in parallel with --jobs).
//
//   royden-lab <command> --manifest path [--jobs N] [--out dir]
//
// Exit codes: 0 success, 2 config error, 3 numerical error.
// ROYDEN_LAB_TOL overrides the default solver tolerances.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>

#include "royden/royden.hpp"

namespace fs = std::filesystem;
using royden::Complex;
using royden::Json;

namespace {

// nlohmann's dump() prints shortest-round-trip doubles; reports promise 17
// significant digits with stable field order, so serialize by hand.
void dump_json(const Json& j, std::ostream& out, int indent = 0) {
    auto pad = [&](int n) { for (int i = 0; i < n; ++i) out << ' '; };
    if (j.is_object()) {
        if (j.empty()) { out << "{}"; return; }
        out << "{\n";
        std::size_t i = 0;
        for (const auto& [key, val] : j.items()) {
            pad(indent + 2);
            out << '"' << key << "\": ";
            dump_json(val, out, indent + 2);
            out << (++i < j.size() ? ",\n" : "\n");
        }
        pad(indent);
        out << '}';
    } else if (j.is_array()) {
        if (j.empty()) { out << "[]"; return; }
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            pad(indent + 2);
            dump_json(j[i], out, indent + 2);
            out << (i + 1 < j.size() ? ",\n" : "\n");
        }
        pad(indent);
        out << ']';
    } else if (j.is_number_float()) {
        out << royden::format_float(j.get<double>());
    } else {
        out << j.dump();
    }
}

void write_report(const Json& report, const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream out(dir / "report.json");
    if (!out) throw royden::IoError("cannot write " + (dir / "report.json").string());
    dump_json(report, out);
    out << '\n';
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw royden::IoError("cannot write " + path.string());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << royden::format_float(m(i, j)) << (j + 1 < m.cols() ? "," : "");
        out << '\n';
    }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

struct Knobs {
    int K = 16;
    int M = 128;
    std::vector<int> D = {4, 8, 12};
    royden::Tolerances tol;
};

Knobs read_knobs(const Json& m) {
    Knobs k;
    if (m.contains("K")) k.K = m.at("K").get<int>();
    if (m.contains("M")) k.M = m.at("M").get<int>();
    if (m.contains("D")) {
        k.D.clear();
        if (m.at("D").is_array())
            for (const auto& d : m.at("D")) k.D.push_back(d.get<int>());
        else
            k.D.push_back(m.at("D").get<int>());
    }
    if (k.K < 1 || k.K > 256) throw royden::ManifestError("K out of range [1, 256]");
    if (const char* env = std::getenv("ROYDEN_LAB_TOL")) {
        double t = std::atof(env);
        if (t <= 0.0) throw royden::ManifestError("ROYDEN_LAB_TOL must be positive");
        k.tol.boundary_residual = k.tol.period_mismatch = k.tol.mass_defect = t;
    }
    if (m.contains("tolerance")) {
        double t = m.at("tolerance").get<double>();
        if (t <= 0.0) throw royden::ManifestError("tolerance must be positive");
        k.tol.boundary_residual = k.tol.period_mismatch = k.tol.mass_defect = t;
    }
    return k;
}

royden::CircularDomain read_domain(const Json& m, const fs::path& base) {
    if (!m.contains("domain")) throw royden::ManifestError("manifest: missing 'domain'");
    const Json& d = m.at("domain");
    if (d.is_string()) {
        fs::path p = d.get<std::string>();
        if (p.is_relative()) p = base / p;
        return royden::parse_domain(royden::load_json_file(p.string()));
    }
    return royden::parse_domain(d);
}

std::vector<std::string> read_corpus(const Json& m) {
    std::vector<std::string> tags;
    if (m.contains("corpus"))
        for (const auto& t : m.at("corpus")) tags.push_back(t.get<std::string>());
    if (tags.empty()) throw royden::ManifestError("manifest: empty 'corpus'");
    return tags;
}

// ---------------------------------------------------------------------------

Json run_measure(const Json& m, const Knobs& k, const royden::DomainContext& ctx,
                 const fs::path& out) {
    Json rep;
    rep["command"] = "measure";
    rep["K"] = k.K;
    rep["M"] = k.M;
    rep["omega_mass"] = ctx.density.mass;
    Json comp = Json::array();
    for (int j = 0; j < ctx.sampling.components(); ++j) {
        royden::BoundaryField chi(ctx.sampling.components(), ctx.sampling.per_component());
        for (int kk = 0; kk < ctx.sampling.per_component(); ++kk) chi.at(j, kk) = 1.0;
        comp.push_back(royden::integrate_omega(chi, ctx.density, ctx.sampling).real());
    }
    rep["omega_component_masses"] = comp;
    Json pmat = Json::array();
    for (Eigen::Index i = 0; i < ctx.periods.p.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < ctx.periods.p.cols(); ++j) row.push_back(ctx.periods.p(i, j));
        pmat.push_back(row);
    }
    rep["period_matrix"] = pmat;
    rep["period_symmetry_defect"] = ctx.periods.symmetry_defect;
    rep["period_min_singular_value"] = ctx.periods.min_singular_value;
    Json units = Json::array();
    for (const auto& u : ctx.units)
        units.push_back(u.value(ctx.domain.base_point()));
    rep["unit_values_at_base"] = units;  // h_j(w^) = omega(Gamma_j)

    royden::write_csv_field((out / "omega_density.csv").string(), ctx.density.density,
                            ctx.sampling);
    for (std::size_t j = 0; j < ctx.q_fields.size(); ++j)
        royden::write_csv_field((out / ("q_" + std::to_string(j + 1) + ".csv")).string(),
                                ctx.q_fields[j], ctx.sampling);
    write_matrix_csv(out / "period_matrix.csv", ctx.periods.p);
    return rep;
}

Json run_factor(const Json& m, const Knobs& k, const royden::DomainContext& ctx,
                const fs::path& out) {
    Json rep;
    rep["command"] = "factor";
    Json results = Json::array();
    int idx = 0;
    for (const std::string& tag : read_corpus(m)) {
        royden::AnalyticRep f = royden::corpus_function(tag, ctx);
        royden::InnerOuterResult fac = royden::inner_outer_factor(f, ctx);
        royden::WindingReport wind =
            royden::winding_vector(fac.inner.trace(ctx.sampling), ctx.sampling);
        royden::OuterVerdict outer = royden::is_outer(f, ctx);
        Json r;
        r["tag"] = tag;
        r["winding"] = wind.k;
        r["zero_count"] = wind.zero_count;
        r["component_moduli"] = fac.component_moduli;
        r["residual"] = fac.residual;
        r["outer"] = outer.outer;
        r["jensen_gap"] = outer.gap;
        results.push_back(r);
        royden::write_csv_field(
            (out / ("inner_" + std::to_string(idx++) + ".csv")).string(),
            fac.inner.trace(ctx.sampling), ctx.sampling);
    }
    rep["results"] = results;
    return rep;
}

Json run_beurling(const Json& m, const Knobs& k, const royden::DomainContext& ctx,
                  const fs::path& out) {
    Json rep;
    rep["command"] = "beurling";
    royden::GalerkinSpace sp = royden::build_space(ctx);

    std::vector<std::string> inners = {"1"};
    std::vector<std::string> outers = {"1"};
    if (m.contains("inners")) {
        inners.clear();
        for (const auto& t : m.at("inners")) inners.push_back(t.get<std::string>());
    }
    if (m.contains("outers")) {
        outers.clear();
        for (const auto& t : m.at("outers")) outers.push_back(t.get<std::string>());
    }
    bool extract = m.contains("extract") && m.at("extract").get<bool>();

    std::ofstream csv(out / "beurling.csv");
    if (!csv) throw royden::IoError("cannot write beurling.csv");
    csv << "inner,outer,D,angle,distance,sigma_ratio\n";

    Json results = Json::array();
    for (const std::string& it : inners) {
        royden::AnalyticRep phi = royden::corpus_function(it, ctx);
        royden::SubspaceModel target =
            royden::multiple_span(phi.trace(ctx.sampling), ctx.K, sp, ctx);
        for (const std::string& ot : outers) {
            royden::AnalyticRep f = royden::corpus_function(it + "*(" + ot + ")", ctx);
            Json r;
            r["inner"] = it;
            r["outer"] = ot;
            Json sweep = Json::array();
            for (int D : k.D) {
                royden::SubspaceModel model =
                    royden::generate_invariant_subspace(f.trace(ctx.sampling), D, sp, ctx);
                double angle = royden::max_principal_angle(model, target);
                double dist = royden::cyclicity_distance(model, sp, ctx);
                Json row;
                row["D"] = D;
                row["angle"] = angle;
                row["distance"] = dist;
                row["sigma_ratio"] = model.sigma_ratio;
                sweep.push_back(row);
                csv << it << ',' << ot << ',' << D << ',' << royden::format_float(angle)
                    << ',' << royden::format_float(dist) << ','
                    << royden::format_float(model.sigma_ratio) << '\n';
                if (extract && D == k.D.back()) {
                    royden::ExtractedGenerator gen =
                        royden::extract_inner_generator(model, sp, ctx);
                    r["generator_equivalent"] =
                        royden::equivalent_inner(gen.inner, phi, ctx);
                }
            }
            r["sweep"] = sweep;
            r["outer_verdict"] = royden::is_outer(f, ctx).outer;
            results.push_back(r);
        }
    }
    rep["results"] = results;
    return rep;
}

Json run_gauge(const Json& m, const Knobs& k, const royden::DomainContext& ctx,
               const fs::path& out) {
    Json rep;
    rep["command"] = "gauge";
    std::vector<Json> specs;
    if (m.contains("gauges"))
        for (const auto& g : m.at("gauges")) specs.push_back(g);
    else if (m.contains("gauge"))
        specs.push_back(m.at("gauge"));
    else
        throw royden::ManifestError("gauge manifest: missing 'gauge' or 'gauges'");
    int fields = m.contains("random_fields") ? m.at("random_fields").get<int>() : 20;
    unsigned seed = m.contains("seed") ? m.at("seed").get<unsigned>() : 7u;

    Json results = Json::array();
    for (const Json& gj : specs) {
        royden::GaugeNormSpec spec = royden::parse_gauge(gj);
        royden::GaugeAxiomReport ax =
            royden::check_gauge_axioms(spec, ctx.density, ctx.sampling);
        Json r;
        r["spec"] = gj;
        r["alpha_one"] = ax.alpha_one;
        r["dominating_margin"] = ax.dominating_margin;
        r["continuity_decay"] = ax.continuity_decay;

        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        double worst_gap = 0.0;  // max of dual pairing minus alpha * alpha'
        Json duals = Json::array();
        for (int t = 0; t < fields; ++t) {
            royden::BoundaryField f(ctx.sampling.components(), ctx.sampling.per_component());
            royden::BoundaryField g(ctx.sampling.components(), ctx.sampling.per_component());
            for (auto& row : f.values)
                for (auto& v : row) v = Complex(unif(rng), unif(rng));
            for (auto& row : g.values)
                for (auto& v : row) v = Complex(unif(rng), unif(rng));
            double primal = royden::gauge_eval(spec, f, ctx.density, ctx.sampling);
            double dual = royden::dual_norm(spec, g, ctx.density, ctx.sampling);
            royden::BoundaryField prod(ctx.sampling.components(),
                                       ctx.sampling.per_component());
            for (int j = 0; j < ctx.sampling.components(); ++j)
                for (int kk = 0; kk < ctx.sampling.per_component(); ++kk)
                    prod.at(j, kk) = std::abs(f.at(j, kk)) * std::abs(g.at(j, kk));
            double pairing =
                royden::integrate_omega(prod, ctx.density, ctx.sampling).real();
            worst_gap = std::max(worst_gap, pairing - primal * dual);
            if (t < 3) {
                Json d;
                d["alpha"] = primal;
                d["alpha_dual"] = dual;
                d["pairing"] = pairing;
                duals.push_back(d);
            }
        }
        r["holder_violation"] = worst_gap;
        r["dual_samples"] = duals;
        results.push_back(r);
    }
    rep["results"] = results;
    return rep;
}

Json run_affiliated(const Json& m, const Knobs& k, const royden::DomainContext& ctx,
                    const fs::path& out) {
    auto tag = [&](const char* key, const char* fallback) {
        return m.contains(key) ? m.at(key).get<std::string>() : std::string(fallback);
    };
    royden::AnalyticRep psi = royden::corpus_function(tag("psi", "w"), ctx);
    royden::AnalyticRep eta = royden::corpus_function(tag("eta", "1"), ctx);
    royden::AnalyticRep u = royden::corpus_function(tag("u", "w-2"), ctx);
    royden::AnalyticRep v = royden::corpus_function(tag("v", "1"), ctx);
    royden::AffiliatedReport ar = royden::affiliated_graph(psi, eta, u, v, ctx);

    Json rep;
    rep["command"] = "affiliated";
    rep["c_lower"] = ar.c_lower;
    rep["c_upper"] = ar.c_upper;
    rep["residual_a"] = ar.residual_a;
    rep["residual_b"] = ar.residual_b;
    rep["scale_at_base"] = complex_json(ar.scale.value(ctx.domain.base_point()));
    royden::write_csv_field((out / "graph_a.csv").string(), ar.a.trace(ctx.sampling),
                            ctx.sampling);
    royden::write_csv_field((out / "graph_b.csv").string(), ar.b.trace(ctx.sampling),
                            ctx.sampling);
    return rep;
}

// ---------------------------------------------------------------------------

int run_entry(const std::string& command, const Json& m, const fs::path& base,
              const fs::path& out) {
    Knobs k = read_knobs(m);
    royden::CircularDomain dom = read_domain(m, base);
    royden::DomainContext ctx = royden::DomainContext::build(dom, k.M, k.K, k.tol);
    fs::create_directories(out);

    Json rep;
    if (command == "measure")
        rep = run_measure(m, k, ctx, out);
    else if (command == "factor")
        rep = run_factor(m, k, ctx, out);
    else if (command == "beurling")
        rep = run_beurling(m, k, ctx, out);
    else if (command == "gauge")
        rep = run_gauge(m, k, ctx, out);
    else if (command == "affiliated")
        rep = run_affiliated(m, k, ctx, out);
    else
        throw royden::ManifestError("unknown command '" + command + "'");

    Json doc;
    doc["report"] = rep;  // deterministic payload
    doc["domain"] = Json::object();
    doc["domain"]["outer"] = Json{{"center", complex_json(dom.outer().center)},
                                  {"radius", dom.outer().radius}};
    Json holes = Json::array();
    for (const auto& h : dom.holes())
        holes.push_back(Json{{"center", complex_json(h.center)}, {"radius", h.radius}});
    doc["domain"]["holes"] = holes;
    doc["domain"]["base_point"] = complex_json(dom.base_point());
    write_report(doc, out);
    return 0;
}

int classify(const std::exception& e) {
    if (dynamic_cast<const royden::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const royden::NumericalError*>(&e)) return 3;
    return 3;
}

const char* error_type(const std::exception& e) {
    if (dynamic_cast<const royden::OverlapError*>(&e)) return "OverlapError";
    if (dynamic_cast<const royden::ContainmentError*>(&e)) return "ContainmentError";
    if (dynamic_cast<const royden::BasePointError*>(&e)) return "BasePointError";
    if (dynamic_cast<const royden::ResolutionError*>(&e)) return "ResolutionError";
    if (dynamic_cast<const royden::ManifestError*>(&e)) return "ManifestError";
    if (dynamic_cast<const royden::IoError*>(&e)) return "IoError";
    if (dynamic_cast<const royden::ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const royden::NumericalError*>(&e)) return "NumericalError";
    return "Error";
}

void emit_error(const std::exception& e, const fs::path& out) {
    Json err;
    err["error"] = Json{{"type", error_type(e)}, {"message", e.what()}};
    std::cerr << err.dump(2) << std::endl;
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream f(out / "error.json");
    if (f) f << err.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hardy-space toolkit for circular multiply connected domains"};
    app.require_subcommand(1);
    std::string manifest_path, out_dir = ".";
    int jobs = 1;
    for (const char* name : {"measure", "factor", "beurling", "gauge", "affiliated"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--manifest", manifest_path, "experiment manifest (JSON)")
            ->required();
        sub->add_option("--jobs", jobs, "parallel manifest entries");
        sub->add_option("--out", out_dir, "output directory");
    }
    CLI11_PARSE(app, argc, argv);
    std::string command = app.get_subcommands().front()->get_name();

    fs::path out(out_dir);
    try {
        Json m = royden::load_json_file(manifest_path);
        fs::path base = fs::path(manifest_path).parent_path();
        std::vector<Json> entries;
        if (m.is_array())
            entries.assign(m.begin(), m.end());
        else if (m.contains("entries"))
            entries.assign(m.at("entries").begin(), m.at("entries").end());
        else
            entries.push_back(m);

        if (entries.size() == 1)
            return run_entry(command, entries[0], base, out);

        std::atomic<int> next{0};
        std::atomic<int> status{0};
        std::mutex err_mtx;
        auto worker = [&] {
            for (int i = next.fetch_add(1); i < static_cast<int>(entries.size());
                 i = next.fetch_add(1)) {
                fs::path sub = out / ("entry_" + std::to_string(i));
                try {
                    run_entry(command, entries[static_cast<std::size_t>(i)], base, sub);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mtx);
                    emit_error(e, sub);
                    int code = classify(e);
                    int cur = status.load();
                    while (cur < code && !status.compare_exchange_weak(cur, code)) {}
                }
            }
        };
        int n = std::max(1, std::min<int>(jobs, static_cast<int>(entries.size())));
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        return status.load();
    } catch (const std::exception& e) {
        emit_error(e, out);
        return classify(e);
    }
}
