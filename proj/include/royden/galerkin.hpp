#ifndef ROYDEN_GALERKIN_HPP
#define ROYDEN_GALERKIN_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "royden/hardy.hpp"

namespace royden {

struct RankCollapseError : NumericalError { using NumericalError::NumericalError; };
struct ExtremalDegenerateError : NumericalError { using NumericalError::NumericalError; };

namespace detail {

/// Flattens a boundary field into the sqrt-weighted node vector in which the
/// Euclidean inner product equals the L^2(Gamma, omega) inner product.
inline Eigen::VectorXcd flatten_weighted(const BoundaryField& f,
                                         const std::vector<double>& omega_w) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(omega_w.size()));
    Eigen::Index i = 0;
    for (const auto& row : f.values)
        for (const auto& z : row) {
            v(i) = z * std::sqrt(omega_w[static_cast<std::size_t>(i)]);
            ++i;
        }
    return v;
}

inline BoundaryField unflatten_weighted(const Eigen::VectorXcd& v,
                                        const std::vector<double>& omega_w,
                                        const BoundarySampling& s) {
    BoundaryField out(s.components(), s.per_component());
    Eigen::Index i = 0;
    for (auto& row : out.values)
        for (auto& z : row) {
            z = v(i) / std::sqrt(omega_w[static_cast<std::size_t>(i)]);
            ++i;
        }
    return out;
}

/// Orthonormal basis (thin Q) of the column span, dropping directions below a
/// relative singular-value threshold.
inline Eigen::MatrixXcd orthonormal_span(const Eigen::MatrixXcd& A, double rel_tol = 1e-12) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return Eigen::MatrixXcd(A.rows(), 0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rel_tol * sv(0)) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace detail

/// Discrete model of L^2(Gamma, omega) = H^2 + conj(H^2_0) + N(Gamma) on the
/// sqrt-omega-weighted node space. Each block is stored as an orthonormal
/// column frame.
struct GalerkinSpace {
    std::vector<double> omega_w;   // node weights of the omega measure
    Eigen::MatrixXcd analytic;     // H^2 block, spanned by the degree-K basis
    Eigen::MatrixXcd conjugate;    // conj of analytic functions vanishing at w^
    Eigen::MatrixXcd defect;       // N(Gamma), spanned by the Q_j
    double min_cross_gram = 0.0;   // smallest principal separation across blocks
};

inline GalerkinSpace build_space(const DomainContext& ctx) {
    GalerkinSpace sp;
    sp.omega_w = detail::omega_weights(ctx.density, ctx.sampling);
    const int cols = analytic_basis_size(ctx.domain, ctx.K);
    const int rows = ctx.sampling.total_nodes();

    Eigen::MatrixXcd raw(rows, cols);
    Eigen::MatrixXcd rawc(rows, cols - 1);
    Eigen::RowVectorXcd at_base = analytic_basis_row(ctx.domain, ctx.K, ctx.domain.base_point());
    int r = 0;
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            Eigen::RowVectorXcd row =
                analytic_basis_row(ctx.domain, ctx.K, ctx.sampling.node(j, k));
            double sw = std::sqrt(sp.omega_w[static_cast<std::size_t>(r)]);
            raw.row(r) = row * sw;
            // Conjugate block: conj(e - e(w^)) over the non-constant elements.
            for (int c = 1; c < cols; ++c)
                rawc(r, c - 1) = std::conj(row(c) - at_base(c)) * sw;
            ++r;
        }
    sp.analytic = detail::orthonormal_span(raw);
    sp.conjugate = detail::orthonormal_span(rawc);

    Eigen::MatrixXcd rawn(rows, ctx.domain.num_holes());
    for (int j = 0; j < ctx.domain.num_holes(); ++j)
        rawn.col(j) = detail::flatten_weighted(ctx.q_fields[static_cast<std::size_t>(j)],
                                               sp.omega_w);
    sp.defect = detail::orthonormal_span(rawn);

    // Cross-block coherence: largest singular value of any pairwise Gram
    // matrix; near-orthogonality of the splitting means this stays small.
    double coh = 0.0;
    auto pair_coh = [&](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
        if (A.cols() == 0 || B.cols() == 0) return 0.0;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A.adjoint() * B);
        return svd.singularValues()(0);
    };
    coh = std::max(coh, pair_coh(sp.analytic, sp.conjugate));
    coh = std::max(coh, pair_coh(sp.analytic, sp.defect));
    coh = std::max(coh, pair_coh(sp.conjugate, sp.defect));
    sp.min_cross_gram = coh;
    return sp;
}

struct Decomposition {
    BoundaryField analytic_part;
    BoundaryField conjugate_part;
    BoundaryField defect_part;
    double residual = 0.0;  // omega-norm of what the three blocks miss
};

/// Orthogonal decomposition of boundary data over the three blocks.
inline Decomposition decompose(const BoundaryField& f, const GalerkinSpace& sp,
                               const DomainContext& ctx) {
    require_shape(f, ctx.sampling);
    Eigen::VectorXcd v = detail::flatten_weighted(f, sp.omega_w);
    auto project = [&](const Eigen::MatrixXcd& Q) -> Eigen::VectorXcd {
        if (Q.cols() == 0) return Eigen::VectorXcd::Zero(v.size());
        return Q * (Q.adjoint() * v);
    };
    Eigen::VectorXcd pa = project(sp.analytic);
    Eigen::VectorXcd pc = project(sp.conjugate);
    Eigen::VectorXcd pn = project(sp.defect);
    Decomposition out{detail::unflatten_weighted(pa, sp.omega_w, ctx.sampling),
                      detail::unflatten_weighted(pc, sp.omega_w, ctx.sampling),
                      detail::unflatten_weighted(pn, sp.omega_w, ctx.sampling), 0.0};
    out.residual = (v - pa - pc - pn).norm();
    return out;
}

/// Truncated model of the smallest invariant subspace containing f: the span
/// of m*f over analytic multipliers m of degree <= D, as an orthonormal frame.
struct SubspaceModel {
    Eigen::MatrixXcd frame;   // orthonormal columns in the weighted node space
    int multiplier_degree = 0;
    double sigma_ratio = 0.0; // smallest kept / largest singular value
};

/// Orthonormal frame for span{m * f : m in the degree-D multiplier basis}.
/// No degree policy is applied here; see generate_invariant_subspace.
inline SubspaceModel multiple_span(const BoundaryField& f, int multiplier_degree,
                                   const GalerkinSpace& sp, const DomainContext& ctx,
                                   double rank_tol = 1e-10) {
    require_shape(f, ctx.sampling);
    const int rows = ctx.sampling.total_nodes();
    const int cols = analytic_basis_size(ctx.domain, multiplier_degree);
    Eigen::MatrixXcd A(rows, cols);
    int r = 0;
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k) {
            A.row(r) = analytic_basis_row(ctx.domain, multiplier_degree,
                                          ctx.sampling.node(j, k)) *
                       (f.at(j, k) * std::sqrt(sp.omega_w[static_cast<std::size_t>(r)]));
            ++r;
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        throw RankCollapseError("generate_invariant_subspace: generator span collapsed");
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_tol * sv(0)) ++rank;
    if (rank == 0)
        throw RankCollapseError("generate_invariant_subspace: generator span collapsed");
    return SubspaceModel{svd.matrixU().leftCols(rank), multiplier_degree,
                         sv(rank - 1) / sv(0)};
}

/// Truncated model of the smallest invariant subspace containing f. The
/// multiplier degree D is capped at K/2 since multiplication raises degree;
/// leakage beyond the ambient truncation is measured, not silently projected.
inline SubspaceModel generate_invariant_subspace(const BoundaryField& f,
                                                 int multiplier_degree,
                                                 const GalerkinSpace& sp,
                                                 const DomainContext& ctx,
                                                 double rank_tol = 1e-10) {
    if (multiplier_degree < 0 || 2 * multiplier_degree > ctx.K)
        throw ConfigError("generate_invariant_subspace: multiplier degree must satisfy "
                          "0 <= D <= K/2");
    return multiple_span(f, multiplier_degree, sp, ctx, rank_tol);
}

/// Largest principal angle (radians) between the column spans of two frames.
inline double max_principal_angle(const SubspaceModel& a, const SubspaceModel& b) {
    if (a.frame.cols() == 0 || b.frame.cols() == 0) return std::numbers::pi / 2;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.frame.adjoint() * b.frame);
    Eigen::Index m = std::min(a.frame.cols(), b.frame.cols());
    double sigma_min = svd.singularValues()(m - 1);
    return std::acos(std::clamp(sigma_min, 0.0, 1.0));
}

/// omega-distance from the constant 1 (the reproducing element at w^) to the
/// modeled subspace. Cyclic subspaces drive this to 0; subspaces of functions
/// vanishing at w^ keep it near 1.
inline double cyclicity_distance(const SubspaceModel& model, const GalerkinSpace& sp,
                                 const DomainContext& ctx) {
    BoundaryField ones(ctx.sampling.components(), ctx.sampling.per_component());
    for (auto& row : ones.values)
        for (auto& v : row) v = 1.0;
    Eigen::VectorXcd one = detail::flatten_weighted(ones, sp.omega_w);
    Eigen::VectorXcd res = one - model.frame * (model.frame.adjoint() * one);
    return res.norm();
}

struct ExtractedGenerator {
    AnalyticRep element;        // extremal element of the subspace (series fit)
    AnalyticRep inner;          // its inner part
    double extremal_value = 0.0;  // |element(w^)| before normalization
    double fit_residual = 0.0;
};

/// Single-element generator of a modeled invariant subspace: maximizes |f(w^)|
/// over the unit ball (evaluation at w^ is integration against the constant 1),
/// then keeps the inner part of the maximizer.
inline ExtractedGenerator extract_inner_generator(const SubspaceModel& model,
                                                  const GalerkinSpace& sp,
                                                  const DomainContext& ctx,
                                                  double fit_tol = 1e-6) {
    BoundaryField ones(ctx.sampling.components(), ctx.sampling.per_component());
    for (auto& row : ones.values)
        for (auto& v : row) v = 1.0;
    Eigen::VectorXcd one = detail::flatten_weighted(ones, sp.omega_w);
    Eigen::VectorXcd coeff = model.frame.adjoint() * one;
    double nrm = coeff.norm();
    if (nrm < 1e-12)
        throw ExtremalDegenerateError(
            "extract_inner_generator: every element of the subspace vanishes at the base "
            "point; no extremal generator exists");
    Eigen::VectorXcd e = model.frame * (coeff / nrm);
    BoundaryField trace = detail::unflatten_weighted(e, sp.omega_w, ctx.sampling);
    AnalyticRep element = fit_analytic_within(ctx.domain, ctx.sampling, trace, ctx.K,
                                              0.1 * fit_tol);
    if (element.fit_residual > fit_tol)
        throw FitError("extract_inner_generator: extremal element fit residual " +
                       std::to_string(element.fit_residual));
    InnerOuterResult fac = inner_outer_factor(element, ctx, fit_tol);
    ExtractedGenerator out{std::move(element), std::move(fac.inner), nrm, 0.0};
    out.fit_residual = out.element.fit_residual;
    return out;
}

/// How far multiplication by the scaled coordinate ((w - c0)/R0) carries the
/// model outside a target frame: max over columns of the unprojected
/// omega-norm. With target == model this reports pure truncation leakage.
inline double invariance_leakage(const SubspaceModel& model, const SubspaceModel& target,
                                 const GalerkinSpace& /*sp*/, const DomainContext& ctx) {
    const int rows = ctx.sampling.total_nodes();
    Eigen::VectorXcd z(rows);
    int r = 0;
    const Circle& o = ctx.domain.outer();
    for (int j = 0; j < ctx.sampling.components(); ++j)
        for (int k = 0; k < ctx.sampling.per_component(); ++k)
            z(r++) = (ctx.sampling.node(j, k) - o.center) / o.radius;
    double worst = 0.0;
    for (Eigen::Index c = 0; c < model.frame.cols(); ++c) {
        Eigen::VectorXcd m = model.frame.col(c).cwiseProduct(z);
        Eigen::VectorXcd res = m - target.frame * (target.frame.adjoint() * m);
        worst = std::max(worst, res.norm());
    }
    return worst;
}

inline double invariance_leakage(const SubspaceModel& model, const GalerkinSpace& sp,
                                 const DomainContext& ctx) {
    return invariance_leakage(model, model, sp, ctx);
}

}  // namespace royden

#endif
