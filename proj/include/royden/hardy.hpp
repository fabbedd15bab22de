#ifndef ROYDEN_HARDY_HPP
#define ROYDEN_HARDY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "royden/analytic.hpp"
#include "royden/gauge.hpp"
#include "royden/geometry.hpp"
#include "royden/laplace.hpp"

namespace royden {

struct ZeroAtBasePointError : NumericalError { using NumericalError::NumericalError; };
struct UnboundedDataError : NumericalError { using NumericalError::NumericalError; };
struct BoundaryZeroError : NumericalError { using NumericalError::NumericalError; };
struct NonIntegerWindingError : NumericalError { using NumericalError::NumericalError; };
struct ZeroOnBoundaryError : NumericalError { using NumericalError::NumericalError; };
struct ZeroLocalizationError : NumericalError { using NumericalError::NumericalError; };
struct PreconditionError : NumericalError { using NumericalError::NumericalError; };

/// Shared per-domain state for the factorization and experiment routines:
/// sampling, harmonic measure, harmonic units, Q functions and period matrix,
/// built once and reused.
struct DomainContext {
    CircularDomain domain;
    BoundarySampling sampling;
    int K;
    Tolerances tol;
    OmegaDensity density;
    std::vector<HarmonicRep> units;
    std::vector<BoundaryField> q_fields;
    PeriodMatrix periods;
    double log_range = 30.0;  // admissible range for log-modulus data

    static DomainContext build(const CircularDomain& domain, int M, int K,
                               const Tolerances& tol = {}) {
        BoundarySampling s(domain, M);
        OmegaDensity density = harmonic_measure_density(domain, s, K, tol);
        std::vector<HarmonicRep> units = harmonic_unit_basis(domain, s, K, tol);
        std::vector<BoundaryField> q = q_functions(units, density, s);
        PeriodMatrix P = period_matrix(units, s, tol);
        return DomainContext{domain, std::move(s), K, tol, std::move(density),
                             std::move(units), std::move(q), std::move(P)};
    }

    /// Lattice of interior probe points, kept clear of the boundary.
    std::vector<Complex> probe_grid(int per_side = 24) const {
        std::vector<Complex> pts;
        const Circle& o = domain.outer();
        double margin = 0.02 * o.radius;
        for (int i = 0; i < per_side; ++i)
            for (int j = 0; j < per_side; ++j) {
                Complex w = o.center + Complex((2.0 * i / (per_side - 1) - 1.0) * o.radius,
                                               (2.0 * j / (per_side - 1) - 1.0) * o.radius);
                if (domain.contains(w, margin)) pts.push_back(w);
            }
        return pts;
    }
};

/// Zero-free analytic function phi(w) = prod_j (w - a_j)^{k_j} * exp(g(w)).
/// The winding vector k classifies it up to exponentials of analytic functions.
struct ZeroFreeForm {
    std::vector<int> winding;       // k_j, one per hole
    std::vector<Complex> anchors;   // a_j, defaults to hole centers
    AnalyticRep exponent;           // g

    Complex value(Complex w) const {
        Complex acc = std::exp(exponent.value(w));
        for (std::size_t j = 0; j < winding.size(); ++j) {
            Complex base = w - anchors[j];
            int k = winding[j];
            for (int m = 0; m < std::abs(k); ++m) acc *= (k > 0) ? base : 1.0 / base;
        }
        return acc;
    }

    BoundaryField trace(const BoundarySampling& s) const {
        return BoundaryField::sample(s, [this](Complex w) { return value(w); });
    }

    static ZeroFreeForm pure_exponent(AnalyticRep g) {
        ZeroFreeForm z{std::vector<int>(static_cast<std::size_t>(g.domain.num_holes()), 0),
                       {},
                       std::move(g)};
        for (const auto& h : z.exponent.domain.holes()) z.anchors.push_back(h.center);
        return z;
    }
};

struct ModulusProfile {
    std::vector<double> component_means;       // omega-weighted mean of |f| per component
    std::vector<double> relative_deviations;   // max relative deviation from the mean
};

inline ModulusProfile boundary_modulus_profile(const BoundaryField& trace,
                                               const BoundarySampling& s,
                                               const OmegaDensity& density) {
    require_shape(trace, s);
    ModulusProfile out;
    for (int j = 0; j < s.components(); ++j) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < s.per_component(); ++k) {
            double w = density.density.at(j, k).real();
            num += w * std::abs(trace.at(j, k));
            den += w;
        }
        double mean = num / den;
        double dev = 0.0;
        for (int k = 0; k < s.per_component(); ++k)
            dev = std::max(dev, std::abs(std::abs(trace.at(j, k)) - mean));
        out.component_means.push_back(mean);
        out.relative_deviations.push_back(mean > 0.0 ? dev / mean : dev);
    }
    return out;
}

struct InnerVerdict {
    bool inner = false;
    std::vector<double> component_moduli;  // rescaled so the Gamma_0 entry is 1
    double rescale = 1.0;                  // factor applied to reach the normalization
    double max_deviation = 0.0;
};

/// Royden inner predicate: |f| constant on each boundary component within tol.
/// The identically-zero function counts as the trivial inner function.
inline InnerVerdict is_inner(const BoundaryField& trace, const BoundarySampling& s,
                             const OmegaDensity& density, double tol = 1e-6) {
    ModulusProfile prof = boundary_modulus_profile(trace, s, density);
    InnerVerdict v;
    double top = *std::max_element(prof.component_means.begin(), prof.component_means.end());
    if (top < 1e-14) {  // trivial inner function
        v.inner = true;
        v.component_moduli.assign(prof.component_means.size(), 0.0);
        return v;
    }
    v.max_deviation = *std::max_element(prof.relative_deviations.begin(),
                                        prof.relative_deviations.end());
    v.inner = v.max_deviation < tol;
    v.rescale = 1.0 / prof.component_means[0];
    for (double m : prof.component_means) v.component_moduli.push_back(m * v.rescale);
    return v;
}

struct OuterVerdict {
    bool outer = false;
    bool zero_at_base = false;
    double log_at_base = 0.0;   // log|f(w^)|
    double omega_mean = 0.0;    // int log|f| domega
    double gap = 0.0;           // omega_mean - log_at_base, >= 0 by Jensen
};

/// Royden outer predicate: Jensen equality log|f(w^)| = int log|f| domega.
inline OuterVerdict is_outer(const BoundaryField& trace, Complex value_at_base,
                             const DomainContext& ctx, double tol = 1e-6) {
    OuterVerdict v;
    double fmax = 0.0;
    for (const auto& row : trace.values)
        for (Complex z : row) fmax = std::max(fmax, std::abs(z));
    if (std::abs(value_at_base) < 1e-8 * fmax) {
        v.zero_at_base = true;
        return v;
    }
    BoundaryField logmod = trace.map([](Complex z) { return Complex(std::log(std::abs(z))); });
    v.log_at_base = std::log(std::abs(value_at_base));
    v.omega_mean = integrate_omega(logmod, ctx.density, ctx.sampling).real();
    v.gap = v.omega_mean - v.log_at_base;
    v.outer = v.gap < tol;
    return v;
}

inline OuterVerdict is_outer(const AnalyticRep& f, const DomainContext& ctx,
                             double tol = 1e-6) {
    return is_outer(f.trace(ctx.sampling), f.value(ctx.domain.base_point()), ctx, tol);
}

inline OuterVerdict is_outer(const ZeroFreeForm& f, const DomainContext& ctx,
                             double tol = 1e-6) {
    return is_outer(f.trace(ctx.sampling), f.value(ctx.domain.base_point()), ctx, tol);
}

struct OuterFromModulus {
    ZeroFreeForm h;          // outer, zero-free, |h| = exp(log_modulus + sum a_j h_j) on Gamma
    HarmonicUnit correction; // the harmonic-unit coefficients folded into the exponent
};

/// Outer function with prescribed boundary log-modulus, up to the harmonic-unit
/// correction that removes the conjugate periods.
inline OuterFromModulus outer_from_log_modulus(const DomainContext& ctx,
                                               const BoundaryField& log_modulus) {
    for (const auto& row : log_modulus.values)
        for (const auto& v : row)
            if (!std::isfinite(v.real()) || std::abs(v.real()) > ctx.log_range)
                throw UnboundedDataError("outer_from_log_modulus: log-modulus out of range");
    HarmonicRep u = solve_dirichlet_within(ctx.domain, ctx.sampling, log_modulus, ctx.K,
                                           ctx.tol);
    HarmonicUnit a = conjugation_correction(u, ctx.periods, ctx.sampling, ctx.tol);
    HarmonicRep corrected = apply_unit(u, a, ctx.units);
    AnalyticRep g = analytic_completion(corrected, ctx.tol);
    return OuterFromModulus{ZeroFreeForm::pure_exponent(std::move(g)), std::move(a)};
}

struct SaitoSplit {
    BoundaryField psi;       // b / h, constant modulus per component
    ZeroFreeForm h;          // outer with 1/h of finite gauge norm
    HarmonicUnit correction;
    double psi_deviation = 0.0;
    double alpha_inv_h = 0.0;
};

/// Splits bounded boundary data b as psi * h with h outer and |psi| locally
/// constant; reports the gauge norm of 1/h.
inline SaitoSplit saito_split(const BoundaryField& b, const GaugeNormSpec& alpha,
                              const DomainContext& ctx) {
    require_shape(b, ctx.sampling);
    for (const auto& row : b.values)
        for (const auto& v : row)
            if (std::abs(v) < std::exp(-ctx.log_range))
                throw UnboundedDataError("saito_split: 1/b not of finite gauge norm");
    BoundaryField logmod = b.map([](Complex z) { return Complex(std::log(std::abs(z))); });
    OuterFromModulus ofm = outer_from_log_modulus(ctx, logmod);

    SaitoSplit out{BoundaryField(ctx.sampling.components(), ctx.sampling.per_component()),
                   std::move(ofm.h), std::move(ofm.correction), 0.0, 0.0};
    BoundaryField inv_h(ctx.sampling.components(), ctx.sampling.per_component());
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Complex hv = out.h.value(ctx.sampling.node(j, k));
            out.psi.at(j, k) = b.at(j, k) / hv;
            inv_h.at(j, k) = 1.0 / hv;
        }
    ModulusProfile prof = boundary_modulus_profile(out.psi, ctx.sampling, ctx.density);
    out.psi_deviation = *std::max_element(prof.relative_deviations.begin(),
                                          prof.relative_deviations.end());
    out.alpha_inv_h = gauge_eval(alpha, inv_h, ctx.density, ctx.sampling);
    return out;
}

namespace detail {

/// Winding number of a closed loop of nonzero samples, by phase tracking.
inline double loop_winding(const std::vector<Complex>& vals) {
    double total = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        Complex cur = vals[k], nxt = vals[(k + 1) % vals.size()];
        if (std::abs(cur) == 0.0 || std::abs(nxt) == 0.0)
            throw NonIntegerWindingError("winding: zero sample on the contour");
        total += std::arg(nxt / cur);
    }
    return total / two_pi;
}

inline int rounded_winding(double w, double defect_limit = 0.1) {
    double r = std::round(w);
    if (std::abs(w - r) >= defect_limit)
        throw NonIntegerWindingError("winding defect " + std::to_string(std::abs(w - r)));
    return static_cast<int>(r);
}

inline int component_winding(const BoundaryField& trace, int component) {
    std::vector<Complex> vals(trace.values[static_cast<std::size_t>(component)]);
    return rounded_winding(loop_winding(vals));
}

}  // namespace detail

struct WindingReport {
    std::vector<int> k;     // winding around each hole
    int outer_winding = 0;  // winding around Gamma_0
    int zero_count = 0;     // outer_winding - sum k, by the argument principle
    double max_defect = 0.0;
};

/// Winding vector of a function with no zeros near Gamma, from its boundary trace.
inline WindingReport winding_vector(const BoundaryField& trace, const BoundarySampling& s) {
    require_shape(trace, s);
    WindingReport rep;
    for (int j = 0; j < s.components(); ++j) {
        double w = detail::loop_winding(trace.values[static_cast<std::size_t>(j)]);
        int r = detail::rounded_winding(w);
        rep.max_defect = std::max(rep.max_defect, std::abs(w - r));
        if (j == 0)
            rep.outer_winding = r;
        else
            rep.k.push_back(r);
    }
    rep.zero_count = rep.outer_winding;
    for (int kj : rep.k) rep.zero_count -= kj;
    return rep;
}

/// Number of zeros of f in the domain, counted with multiplicity, by the
/// argument principle over the full boundary cycle.
inline int zero_count(const BoundaryField& trace, const BoundarySampling& s) {
    return winding_vector(trace, s).zero_count;
}

struct InnerOuterResult {
    AnalyticRep inner;                     // fitted series for phi
    ZeroFreeForm outer;                    // g, zero-free
    HarmonicUnit correction;               // harmonic-unit constants of the outer build
    std::vector<double> component_moduli;  // measured |phi| per component, entry 0 = 1
    double residual = 0.0;                 // max_Gamma |f - phi*g|
};

/// Inner-outer factorization via the outer quotient: g matches |f| on Gamma up
/// to the unit correction, and phi = f/g is fitted back to a series. Phase is
/// normalized so phi is real positive at the first Gamma_0 node.
inline InnerOuterResult inner_outer_factor_trace(const BoundaryField& f_trace,
                                                 const DomainContext& ctx,
                                                 double fit_tol = 1e-6) {
    require_shape(f_trace, ctx.sampling);
    double fmax = 0.0, fmin = std::numeric_limits<double>::infinity();
    for (const auto& row : f_trace.values)
        for (const auto& v : row) {
            fmax = std::max(fmax, std::abs(v));
            fmin = std::min(fmin, std::abs(v));
        }
    if (fmax == 0.0 || fmin < fmax * 1e-13)
        throw BoundaryZeroError("inner_outer_factor: |f| vanishes at a boundary node");

    BoundaryField logmod =
        f_trace.map([](Complex z) { return Complex(std::log(std::abs(z))); });
    OuterFromModulus ofm = outer_from_log_modulus(ctx, logmod);

    BoundaryField phi_nodes(ctx.sampling.components(), ctx.sampling.per_component());
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k)
            phi_nodes.at(j, k) = f_trace.at(j, k) / ofm.h.value(ctx.sampling.node(j, k));

    AnalyticRep phi = fit_analytic_within(ctx.domain, ctx.sampling, phi_nodes, ctx.K,
                                          0.1 * fit_tol);
    if (phi.fit_residual > fit_tol)
        throw FitError("inner_outer_factor: inner-part fit residual " +
                       std::to_string(phi.fit_residual) + "; increase K");

    // Ray convention: rotate so phi is real positive at the first outer node.
    Complex probe = phi.value(ctx.sampling.node(0, 0));
    if (std::abs(probe) > 0.0) {
        Complex lambda = std::conj(probe) / std::abs(probe);
        phi *= lambda;
        ofm.h.exponent.outer_coeffs[0] += Complex(0.0, std::arg(std::conj(lambda)));
    }

    InnerOuterResult out{std::move(phi), std::move(ofm.h), std::move(ofm.correction), {}, 0.0};
    BoundaryField phi_trace = out.inner.trace(ctx.sampling);
    ModulusProfile prof = boundary_modulus_profile(phi_trace, ctx.sampling, ctx.density);
    for (double m : prof.component_means)
        out.component_moduli.push_back(m / prof.component_means[0]);
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Complex recon = phi_trace.at(j, k) * out.outer.value(ctx.sampling.node(j, k));
            out.residual = std::max(out.residual, std::abs(f_trace.at(j, k) - recon));
        }
    return out;
}

inline InnerOuterResult inner_outer_factor(const AnalyticRep& f, const DomainContext& ctx,
                                           double fit_tol = 1e-6) {
    return inner_outer_factor_trace(f.trace(ctx.sampling), ctx, fit_tol);
}

/// Invertible-inner test: zero-free in the domain (argument-principle count 0)
/// with positive minimum modulus on an interior probe grid.
inline bool is_invertible_inner(const AnalyticRep& phi, const DomainContext& ctx) {
    BoundaryField trace = phi.trace(ctx.sampling);
    if (zero_count(trace, ctx.sampling) != 0) return false;
    double minabs = std::numeric_limits<double>::infinity();
    for (Complex w : ctx.probe_grid()) minabs = std::min(minabs, std::abs(phi.value(w)));
    return minabs > 1e-10;
}

namespace detail {

/// Winding of f around a small circle centered at z0 (zeros counted inside).
inline int small_circle_winding(const AnalyticRep& f, Complex z0, double radius,
                                int samples = 128) {
    std::vector<Complex> vals;
    vals.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        double t = two_pi * k / samples;
        vals.push_back(f.value(z0 + radius * Complex(std::cos(t), std::sin(t))));
    }
    return rounded_winding(loop_winding(vals));
}

struct Cell {
    double x0, y0, size;
};

/// Zero count inside an axis-aligned square cell by phase tracking along its
/// boundary. The cell must lie inside the domain.
inline int cell_winding(const AnalyticRep& f, const Cell& c, int per_edge = 24) {
    std::vector<Complex> vals;
    vals.reserve(static_cast<std::size_t>(4 * per_edge));
    auto push = [&](double x, double y) { vals.push_back(f.value(Complex(x, y))); };
    for (int k = 0; k < per_edge; ++k) push(c.x0 + c.size * k / per_edge, c.y0);
    for (int k = 0; k < per_edge; ++k) push(c.x0 + c.size, c.y0 + c.size * k / per_edge);
    for (int k = 0; k < per_edge; ++k) push(c.x0 + c.size * (per_edge - k) / per_edge, c.y0 + c.size);
    for (int k = 0; k < per_edge; ++k) push(c.x0, c.y0 + c.size * (per_edge - k) / per_edge);
    return rounded_winding(loop_winding(vals));
}

inline int cell_winding_jittered(const AnalyticRep& f, Cell c, std::mt19937& rng) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        try {
            return cell_winding(f, c, 24 + 24 * attempt);
        } catch (const NonIntegerWindingError&) {
            std::uniform_real_distribution<double> d(-0.05, 0.05);
            c.x0 += d(rng) * c.size;
            c.y0 += d(rng) * c.size;
            c.size *= 1.0 + std::abs(d(rng));
        }
    }
    throw ZeroLocalizationError("cell winding failed to stabilize under jitter");
}

inline bool cell_inside(const CircularDomain& dom, const Cell& c, double margin) {
    const std::array<Complex, 4> corners = {
        Complex(c.x0, c.y0), Complex(c.x0 + c.size, c.y0),
        Complex(c.x0, c.y0 + c.size), Complex(c.x0 + c.size, c.y0 + c.size)};
    for (Complex w : corners)
        if (!dom.contains(w, margin)) return false;
    return true;
}

inline bool cell_outside(const CircularDomain& dom, const Cell& c) {
    // Conservative: cell is certainly outside the domain region of interest if
    // its center is outside and its diagonal cannot reach the domain.
    Complex center(c.x0 + c.size / 2, c.y0 + c.size / 2);
    double diag = c.size * std::numbers::sqrt2 / 2;
    return !dom.contains(center, -diag);
}

}  // namespace detail

/// Zeros of a series function in the domain, located by quadtree subdivision
/// with argument-principle counts, then polished by Newton iteration.
/// Returns (location, multiplicity) pairs. Zeros must stay clear of Gamma:
/// cells still straddling a boundary circle at the clearance scale are
/// dropped, so zeros within a few parts in 10^3 of the boundary are out of
/// reach (the total-count cross-check turns that into an error rather than a
/// silent miss). Distinct zeros closer than min_cell merge into one
/// multiplicity.
inline std::vector<std::pair<Complex, int>> locate_zeros(const AnalyticRep& f,
                                                         const DomainContext& ctx,
                                                         double min_cell = 1e-4) {
    const int total = zero_count(f.trace(ctx.sampling), ctx.sampling);
    if (total == 0) return {};
    std::mt19937 rng(0x5eed);
    const Circle& o = ctx.domain.outer();

    std::vector<std::pair<Complex, int>> found;
    std::vector<detail::Cell> stack;
    const int grid = 16;
    double cell0 = 2.0 * o.radius / grid;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            stack.push_back({o.center.real() - o.radius + i * cell0,
                             o.center.imag() - o.radius + j * cell0, cell0});

    while (!stack.empty()) {
        detail::Cell c = stack.back();
        stack.pop_back();
        if (detail::cell_outside(ctx.domain, c)) continue;
        if (!detail::cell_inside(ctx.domain, c, 1e-9)) {
            // Straddles a boundary circle: split a few times, then give up --
            // the circle straddles at every scale and zeros are assumed
            // bounded away from Gamma.
            if (c.size < 2e-3 * o.radius) continue;
            double half = c.size / 2;
            stack.push_back({c.x0, c.y0, half});
            stack.push_back({c.x0 + half, c.y0, half});
            stack.push_back({c.x0, c.y0 + half, half});
            stack.push_back({c.x0 + half, c.y0 + half, half});
            continue;
        }
        int count = detail::cell_winding_jittered(f, c, rng);
        if (count == 0) continue;
        if (c.size < min_cell) {
            found.emplace_back(Complex(c.x0 + c.size / 2, c.y0 + c.size / 2), count);
            continue;
        }
        double half = c.size / 2;
        stack.push_back({c.x0, c.y0, half});
        stack.push_back({c.x0 + half, c.y0, half});
        stack.push_back({c.x0, c.y0 + half, half});
        stack.push_back({c.x0 + half, c.y0 + half, half});
    }

    int located = 0;
    for (auto& [z, m] : found) {
        // Newton polish; the multiplicity-m step z -= m f/f' stays quadratic.
        for (int it = 0; it < 40; ++it) {
            Complex fv = f.value(z);
            Complex dv = f.derivative(z);
            if (std::abs(dv) == 0.0) break;
            Complex step = double(m) * fv / dv;
            if (std::abs(step) > 1e-2) break;  // keep the quadtree location
            z -= step;
            if (std::abs(step) < 1e-14) break;
        }
        located += m;
    }
    // Zeros closer than the cell resolution are one zero of higher
    // multiplicity whose fit perturbation split it; merge them.
    std::vector<std::pair<Complex, int>> merged;
    for (const auto& [z, m] : found) {
        bool absorbed = false;
        for (auto& [zm, mm] : merged) {
            if (std::abs(z - zm) < 2.0 * min_cell) {
                zm = (zm * double(mm) + z * double(m)) / double(mm + m);
                mm += m;
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.emplace_back(z, m);
    }
    found = std::move(merged);
    if (located != total)
        throw ZeroLocalizationError("locate_zeros: found " + std::to_string(located) +
                                    " of " + std::to_string(total) + " zeros");
    return found;
}

/// Inner function with a prescribed finite zero set: the inner part of the
/// polynomial with exactly those zeros. Verified by small-circle winding counts.
inline AnalyticRep zero_based_inner(const std::vector<std::pair<Complex, int>>& zeros,
                                    const DomainContext& ctx, double fit_tol = 1e-6) {
    for (const auto& [z, m] : zeros) {
        if (m < 1) throw PreconditionError("zero_based_inner: multiplicity must be >= 1");
        if (!ctx.domain.contains(z, 1e-6))
            throw ZeroOnBoundaryError("zero_based_inner: zero on or outside Gamma");
    }
    if (zeros.empty()) return AnalyticRep::constant(ctx.domain, 1.0, ctx.K);

    BoundaryField poly = BoundaryField::sample(ctx.sampling, [&](Complex w) {
        Complex acc = 1.0;
        for (const auto& [z, m] : zeros)
            for (int i = 0; i < m; ++i) acc *= (w - z);
        return acc;
    });
    InnerOuterResult fac = inner_outer_factor_trace(poly, ctx, fit_tol);
    for (const auto& [z, m] : zeros) {
        double r = std::min(1e-3, 0.25 * ctx.domain.distance_to_boundary(z));
        if (detail::small_circle_winding(fac.inner, z, r) != m)
            throw ZeroLocalizationError("zero_based_inner: constructed inner part has wrong"
                                        " multiplicity at a prescribed zero");
    }
    return std::move(fac.inner);
}

struct BlaschkeSingularSplit {
    AnalyticRep blaschke;   // phi_0, carries the zeros
    AnalyticRep zero_free;  // phi_1, inner and zero-free (invertible at desk scale)
    std::vector<std::pair<Complex, int>> zeros;
};

/// Splits an inner function as phi = phi_0 * phi_1 with phi_0 built from the
/// located zeros. Series-representable inner functions on analytic boundaries
/// carry no genuine singular factor, so phi_1 is certified zero-free instead.
inline BlaschkeSingularSplit blaschke_singular_split(const AnalyticRep& phi,
                                                     const DomainContext& ctx,
                                                     double fit_tol = 1e-6) {
    BlaschkeSingularSplit out{AnalyticRep::constant(ctx.domain, 1.0, ctx.K),
                              AnalyticRep::constant(ctx.domain, 1.0, ctx.K),
                              locate_zeros(phi, ctx)};
    if (!out.zeros.empty()) out.blaschke = zero_based_inner(out.zeros, ctx, fit_tol);

    BoundaryField ratio(ctx.sampling.components(), ctx.sampling.per_component());
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k)
            ratio.at(j, k) = phi.value(ctx.sampling.node(j, k)) /
                             out.blaschke.value(ctx.sampling.node(j, k));
    out.zero_free = fit_analytic_within(ctx.domain, ctx.sampling, ratio, ctx.K,
                                        0.1 * fit_tol);
    if (out.zero_free.fit_residual > fit_tol)
        throw FitError("blaschke_singular_split: zero-free factor fit residual " +
                       std::to_string(out.zero_free.fit_residual));
    if (zero_count(out.zero_free.trace(ctx.sampling), ctx.sampling) != 0)
        throw ZeroLocalizationError("blaschke_singular_split: residual factor has zeros");
    return out;
}

/// Divisibility of inner functions: phi | psi when psi/phi fits an analytic
/// series with small relative residual and stays bounded on a probe grid. A
/// genuine pole of the quotient shows up as an O(1) fit residual.
inline bool divides(const AnalyticRep& phi, const AnalyticRep& psi, const DomainContext& ctx,
                    double rel_tol = 1e-6) {
    BoundaryField quot(ctx.sampling.components(), ctx.sampling.per_component());
    double qmax = 0.0;
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Complex pv = phi.value(ctx.sampling.node(j, k));
            if (std::abs(pv) < 1e-13)
                throw BoundaryZeroError("divides: divisor vanishes at a boundary node");
            quot.at(j, k) = psi.value(ctx.sampling.node(j, k)) / pv;
            qmax = std::max(qmax, std::abs(quot.at(j, k)));
        }
    AnalyticRep q = fit_analytic_within(ctx.domain, ctx.sampling, quot, ctx.K,
                                        0.1 * rel_tol * std::max(1.0, qmax));
    if (q.fit_residual > rel_tol * std::max(1.0, qmax)) return false;
    for (Complex w : ctx.probe_grid())
        if (std::abs(q.value(w)) > 1e6 * std::max(1.0, qmax)) return false;
    return true;
}

inline bool equivalent_inner(const AnalyticRep& phi, const AnalyticRep& psi,
                             const DomainContext& ctx, double rel_tol = 1e-6) {
    return divides(phi, psi, ctx, rel_tol) && divides(psi, phi, ctx, rel_tol);
}

struct AffiliatedReport {
    ZeroFreeForm scale;      // outer F with |F| comparable to |u| + |v|
    AnalyticRep a, b;        // u/F and v/F
    double c_lower = 0.0;    // min over Gamma of |a| + |b|
    double c_upper = 0.0;    // max over Gamma of |a| + |b|
    double residual_a = 0.0, residual_b = 0.0;
};

/// Graph normalization for the affiliated operator psi a / (eta b): builds the
/// outer comparison function F from |u| + |v| and measures the two-sided bound
/// 0 < c <= |a| + |b| <= C on the boundary.
inline AffiliatedReport affiliated_graph(const AnalyticRep& psi, const AnalyticRep& eta,
                                         const AnalyticRep& u, const AnalyticRep& v,
                                         const DomainContext& ctx) {
    if (!is_inner(psi.trace(ctx.sampling), ctx.sampling, ctx.density).inner ||
        !is_inner(eta.trace(ctx.sampling), ctx.sampling, ctx.density).inner)
        throw PreconditionError("affiliated_graph: psi and eta must be inner");
    if (!is_outer(u, ctx).outer || !is_outer(v, ctx).outer)
        throw PreconditionError("affiliated_graph: u and v must be outer");

    BoundaryField usum(ctx.sampling.components(), ctx.sampling.per_component());
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Complex w = ctx.sampling.node(j, k);
            usum.at(j, k) = std::log(std::abs(u.value(w)) + std::abs(v.value(w)));
        }
    OuterFromModulus ofm = outer_from_log_modulus(ctx, usum);

    BoundaryField fa(ctx.sampling.components(), ctx.sampling.per_component());
    BoundaryField fb(ctx.sampling.components(), ctx.sampling.per_component());
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Complex w = ctx.sampling.node(j, k);
            Complex F = ofm.h.value(w);
            fa.at(j, k) = u.value(w) / F;
            fb.at(j, k) = v.value(w) / F;
            double s = std::abs(fa.at(j, k)) + std::abs(fb.at(j, k));
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    AffiliatedReport rep{std::move(ofm.h),
                         fit_analytic_within(ctx.domain, ctx.sampling, fa, ctx.K, 1e-8),
                         fit_analytic_within(ctx.domain, ctx.sampling, fb, ctx.K, 1e-8),
                         lo, hi, 0.0, 0.0};
    rep.residual_a = rep.a.fit_residual;
    rep.residual_b = rep.b.fit_residual;
    return rep;
}

}  // namespace royden

#endif
