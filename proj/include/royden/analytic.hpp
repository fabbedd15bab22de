#ifndef ROYDEN_ANALYTIC_HPP
#define ROYDEN_ANALYTIC_HPP

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "royden/geometry.hpp"

namespace royden {

struct FitError : NumericalError { using NumericalError::NumericalError; };

/// Single-valued analytic function on a circular domain, expanded over the
/// natural Laurent-type basis. Terms are stored radius-scaled,
///   e_{0,k}(w) = ((w - c0)/R0)^k            k = 0..K
///   e_{j,k}(w) = (r_j/(w - c_j))^k          k = 1..K, hole j
/// so every basis function has modulus one on its own circle.
struct AnalyticRep {
    CircularDomain domain;
    int K = 0;
    std::vector<Complex> outer_coeffs;               // k = 0..K
    std::vector<std::vector<Complex>> hole_coeffs;   // per hole, k = 1..K
    double fit_residual = 0.0;                       // max boundary misfit of a fit

    explicit AnalyticRep(const CircularDomain& dom, int truncation)
        : domain(dom),
          K(truncation),
          outer_coeffs(static_cast<std::size_t>(truncation) + 1, Complex(0.0)),
          hole_coeffs(static_cast<std::size_t>(dom.num_holes()),
                      std::vector<Complex>(static_cast<std::size_t>(truncation),
                                           Complex(0.0))) {}

    static AnalyticRep constant(const CircularDomain& dom, Complex c, int truncation = 0) {
        AnalyticRep f(dom, truncation);
        f.outer_coeffs[0] = c;
        return f;
    }

    Complex value(Complex w) const {
        const Circle& o = domain.outer();
        Complex z = (w - o.center) / o.radius;
        Complex acc = 0.0, p = 1.0;
        for (int k = 0; k <= K; ++k) {
            acc += outer_coeffs[static_cast<std::size_t>(k)] * p;
            p *= z;
        }
        for (int j = 0; j < domain.num_holes(); ++j) {
            const Circle& h = domain.holes()[static_cast<std::size_t>(j)];
            Complex q = h.radius / (w - h.center);
            Complex pk = q;
            for (int k = 1; k <= K; ++k) {
                acc += hole_coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] * pk;
                pk *= q;
            }
        }
        return acc;
    }

    Complex derivative(Complex w) const {
        const Circle& o = domain.outer();
        Complex z = (w - o.center) / o.radius;
        Complex acc = 0.0, p = 1.0;  // p = z^{k-1}
        for (int k = 1; k <= K; ++k) {
            acc += outer_coeffs[static_cast<std::size_t>(k)] * double(k) * p / o.radius;
            p *= z;
        }
        for (int j = 0; j < domain.num_holes(); ++j) {
            const Circle& h = domain.holes()[static_cast<std::size_t>(j)];
            Complex d = w - h.center;
            Complex q = h.radius / d;
            Complex pk = q;
            for (int k = 1; k <= K; ++k) {
                acc += hole_coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] *
                       (-double(k)) * pk / d;
                pk *= q;
            }
        }
        return acc;
    }

    BoundaryField trace(const BoundarySampling& s) const {
        return BoundaryField::sample(s, [this](Complex w) { return value(w); });
    }

    AnalyticRep& operator*=(Complex c) {
        for (auto& a : outer_coeffs) a *= c;
        for (auto& row : hole_coeffs)
            for (auto& a : row) a *= c;
        return *this;
    }
};

/// Number of complex coefficients in the degree-K basis on `dom`.
inline int analytic_basis_size(const CircularDomain& dom, int K) {
    return 1 + K + dom.num_holes() * K;
}

/// Basis values of all degree-K elements at w, ordered as the coefficients
/// are stored: outer k=0..K, then hole 1 k=1..K, hole 2, ...
inline Eigen::RowVectorXcd analytic_basis_row(const CircularDomain& dom, int K, Complex w) {
    Eigen::RowVectorXcd row(analytic_basis_size(dom, K));
    const Circle& o = dom.outer();
    Complex z = (w - o.center) / o.radius;
    Complex p = 1.0;
    int col = 0;
    for (int k = 0; k <= K; ++k) {
        row(col++) = p;
        p *= z;
    }
    for (const auto& h : dom.holes()) {
        Complex q = h.radius / (w - h.center);
        Complex pk = q;
        for (int k = 1; k <= K; ++k) {
            row(col++) = pk;
            pk *= q;
        }
    }
    return row;
}

/// Least-squares fit of boundary samples to a degree-K AnalyticRep. The fit
/// residual (max node misfit) is attached; callers decide what is acceptable.
inline AnalyticRep fit_analytic(const CircularDomain& dom, const BoundarySampling& s,
                                const BoundaryField& values, int K) {
    require_shape(values, s);
    const int rows = s.total_nodes();
    const int cols = analytic_basis_size(dom, K);
    if (rows < 2 * cols)
        throw FitError("fit_analytic: sampling too coarse for requested truncation");
    Eigen::MatrixXcd A(rows, cols);
    Eigen::VectorXcd b(rows);
    int r = 0;
    for (int j = 0; j < s.components(); ++j)
        for (int k = 0; k < s.per_component(); ++k) {
            A.row(r) = analytic_basis_row(dom, K, s.node(j, k));
            b(r) = values.at(j, k);
            ++r;
        }
    Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);

    AnalyticRep f(dom, K);
    int col = 0;
    for (int k = 0; k <= K; ++k) f.outer_coeffs[static_cast<std::size_t>(k)] = x(col++);
    for (int j = 0; j < dom.num_holes(); ++j)
        for (int k = 1; k <= K; ++k)
            f.hole_coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] = x(col++);

    double res = (A * x - b).cwiseAbs().maxCoeff();
    f.fit_residual = res;
    return f;
}

/// Fit that raises the truncation (doubling, capped by the sampling) until the
/// residual reaches `target`. Callers still judge the final residual; this only
/// spends more terms when the data demands them.
inline AnalyticRep fit_analytic_within(const CircularDomain& dom, const BoundarySampling& s,
                                       const BoundaryField& values, int K, double target) {
    const int kmax = std::max(1, (s.total_nodes() / 2 - 1) / dom.num_components());
    int k = std::min(K, kmax);
    for (;;) {
        AnalyticRep f = fit_analytic(dom, s, values, k);
        if (f.fit_residual <= target || k >= kmax) return f;
        k = std::min(2 * k, kmax);
    }
}

}  // namespace royden

#endif
