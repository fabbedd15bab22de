#ifndef ROYDEN_LAPLACE_HPP
#define ROYDEN_LAPLACE_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <vector>

#include "royden/analytic.hpp"
#include "royden/geometry.hpp"

namespace royden {

struct IllConditionedError : NumericalError { using NumericalError::NumericalError; };
struct ResidualError : NumericalError { using NumericalError::NumericalError; };
struct MassError : NumericalError { using NumericalError::NumericalError; };
struct PeriodMismatchError : NumericalError { using NumericalError::NumericalError; };
struct SingularMatrixError : NumericalError { using NumericalError::NumericalError; };
struct NonzeroPeriodError : NumericalError { using NumericalError::NumericalError; };

struct Tolerances {
    double boundary_residual = 1e-8;
    double period_mismatch = 1e-8;
    double mass_defect = 1e-8;
    double singular_threshold = 1e-10;
    double condition_limit = 1e12;
};

/// Harmonic function on a circular domain in series form,
///   u(w) = constant + sum_k Re(c_{0,k} ((w-c0)/R0)^k)
///        + sum_{j,k} Re(c_{j,k} (r_j/(w-c_j))^k) + sum_j b_j log|w-c_j|.
/// The basis is radius-scaled like AnalyticRep. All period and normal-derivative
/// computations are exact term-wise on this representation.
///
/// Orientation convention: boundary circles are counterclockwise parameter
/// curves; signs are anchored by Per(log|w-c_j|, gamma_j) = 2*pi, so
/// Per(u, gamma_j) = 2*pi*b_j for every representable u.
struct HarmonicRep {
    CircularDomain domain;
    int K = 0;
    double constant = 0.0;
    std::vector<Complex> outer_coeffs;               // k = 1..K
    std::vector<std::vector<Complex>> hole_coeffs;   // per hole, k = 1..K
    std::vector<double> log_coeffs;                  // per hole

    double residual = 0.0;    // max boundary misfit of the solve
    double condition = 0.0;   // collocation matrix condition estimate

    explicit HarmonicRep(const CircularDomain& dom, int truncation)
        : domain(dom),
          K(truncation),
          outer_coeffs(static_cast<std::size_t>(truncation), Complex(0.0)),
          hole_coeffs(static_cast<std::size_t>(dom.num_holes()),
                      std::vector<Complex>(static_cast<std::size_t>(truncation),
                                           Complex(0.0))),
          log_coeffs(static_cast<std::size_t>(dom.num_holes()), 0.0) {}

    double value(Complex w) const {
        const Circle& o = domain.outer();
        Complex z = (w - o.center) / o.radius;
        double acc = constant;
        Complex p = z;
        for (int k = 1; k <= K; ++k) {
            acc += (outer_coeffs[static_cast<std::size_t>(k - 1)] * p).real();
            p *= z;
        }
        for (int j = 0; j < domain.num_holes(); ++j) {
            const Circle& h = domain.holes()[static_cast<std::size_t>(j)];
            Complex q = h.radius / (w - h.center);
            Complex pk = q;
            for (int k = 1; k <= K; ++k) {
                acc += (hole_coeffs[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)] * pk).real();
                pk *= q;
            }
            acc += log_coeffs[static_cast<std::size_t>(j)] * std::log(std::abs(w - h.center));
        }
        return acc;
    }

    /// Derivative F' of the (possibly multivalued) analytic completion F with
    /// Re F = u. F' is single-valued; the gradient of u is conj(F').
    Complex complex_derivative(Complex w) const {
        const Circle& o = domain.outer();
        Complex z = (w - o.center) / o.radius;
        Complex acc = 0.0;
        Complex p = 1.0;  // z^{k-1}
        for (int k = 1; k <= K; ++k) {
            acc += outer_coeffs[static_cast<std::size_t>(k - 1)] * double(k) * p / o.radius;
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
            acc += log_coeffs[static_cast<std::size_t>(j)] / d;
        }
        return acc;
    }

    /// In-place u += a * v. Layouts must match; v may be shorter (v.K <= K).
    HarmonicRep& axpy(double a, const HarmonicRep& v) {
        if (v.K > K || v.domain.num_holes() != domain.num_holes())
            throw ShapeError("HarmonicRep::axpy: incompatible representations");
        constant += a * v.constant;
        for (std::size_t k = 0; k < v.outer_coeffs.size(); ++k)
            outer_coeffs[k] += a * v.outer_coeffs[k];
        for (std::size_t j = 0; j < hole_coeffs.size(); ++j)
            for (std::size_t k = 0; k < v.hole_coeffs[j].size(); ++k)
                hole_coeffs[j][k] += a * v.hole_coeffs[j][k];
        for (std::size_t j = 0; j < log_coeffs.size(); ++j)
            log_coeffs[j] += a * v.log_coeffs[j];
        return *this;
    }
};

struct HarmonicUnit {
    std::vector<double> a;  // coefficients of h_1..h_n
};

struct PeriodMatrix {
    Eigen::MatrixXd p;
    double symmetry_defect = 0.0;
    double min_singular_value = 0.0;
};

struct OmegaDensity {
    BoundaryField density;  // real, strictly positive
    double mass = 0.0;      // quadrature against ds; should be 1
};

/// Least-squares Dirichlet solve: collocate the series at the sampling nodes
/// and solve the overdetermined real system by SVD. Residual and condition
/// number are attached to the result.
inline HarmonicRep solve_dirichlet(const CircularDomain& domain, const BoundarySampling& s,
                                   const BoundaryField& data, int K,
                                   const Tolerances& tol = {}) {
    require_shape(data, s);
    if (K < 1 || K > s.per_component() / 2 - 1)
        throw ResolutionError("solve_dirichlet: require 1 <= K <= M/2 - 1");
    const int n = domain.num_holes();
    const int rows = s.total_nodes();
    const int cols = 1 + 2 * K * (n + 1) + n;

    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    const Circle& o = domain.outer();
    int r = 0;
    for (int j = 0; j < s.components(); ++j)
        for (int m = 0; m < s.per_component(); ++m) {
            Complex w = s.node(j, m);
            int col = 0;
            A(r, col++) = 1.0;
            Complex z = (w - o.center) / o.radius;
            Complex p = z;
            for (int k = 1; k <= K; ++k) {
                A(r, col++) = p.real();
                A(r, col++) = -p.imag();  // Re(i * p) = -Im p for imaginary part
                p *= z;
            }
            for (int hj = 0; hj < n; ++hj) {
                const Circle& h = domain.holes()[static_cast<std::size_t>(hj)];
                Complex q = h.radius / (w - h.center);
                Complex pk = q;
                for (int k = 1; k <= K; ++k) {
                    A(r, col++) = pk.real();
                    A(r, col++) = -pk.imag();
                    pk *= q;
                }
            }
            for (int hj = 0; hj < n; ++hj)
                A(r, col++) = std::log(std::abs(w - domain.holes()[static_cast<std::size_t>(hj)].center));
            b(r) = data.at(j, m).real();
            ++r;
        }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (cond > tol.condition_limit)
        throw IllConditionedError("solve_dirichlet: collocation condition " + std::to_string(cond));
    Eigen::VectorXd x = svd.solve(b);

    HarmonicRep u(domain, K);
    int col = 0;
    u.constant = x(col++);
    for (int k = 1; k <= K; ++k) {
        double re = x(col++), im = x(col++);
        u.outer_coeffs[static_cast<std::size_t>(k - 1)] = Complex(re, im);
    }
    for (int hj = 0; hj < n; ++hj)
        for (int k = 1; k <= K; ++k) {
            double re = x(col++), im = x(col++);
            u.hole_coeffs[static_cast<std::size_t>(hj)][static_cast<std::size_t>(k - 1)] = Complex(re, im);
        }
    for (int hj = 0; hj < n; ++hj) u.log_coeffs[static_cast<std::size_t>(hj)] = x(col++);

    u.condition = cond;
    u.residual = (A * x - b).cwiseAbs().maxCoeff();
    if (u.residual > tol.boundary_residual)
        throw ResidualError("solve_dirichlet: boundary misfit " + std::to_string(u.residual));
    return u;
}

/// Dirichlet solve that raises the truncation until the residual tolerance is
/// met or the sampling cannot support more terms. Data whose harmonic series
/// converges slowly (e.g. log-distance data for a pole near the middle of the
/// domain) needs more terms than indicator-type data; K is a floor here.
inline HarmonicRep solve_dirichlet_within(const CircularDomain& domain,
                                          const BoundarySampling& s,
                                          const BoundaryField& data, int K,
                                          const Tolerances& tol = {}) {
    const int kmax = s.per_component() / 2 - 1;
    int k = std::min(K, kmax);
    for (;;) {
        try {
            return solve_dirichlet(domain, s, data, k, tol);
        } catch (const ResidualError&) {
            if (k >= kmax) throw;
            k = std::min(2 * k, kmax);
        }
    }
}

inline double evaluate_harmonic(const HarmonicRep& u, Complex w) {
    if (!u.domain.contains(w))
        throw DomainError("evaluate_harmonic: point not in the open domain");
    return u.value(w);
}

/// Interior-normal derivative of u at every sampling node, term-wise exact.
inline BoundaryField normal_derivative(const HarmonicRep& u, const BoundarySampling& s) {
    if (u.domain.num_holes() != s.domain().num_holes())
        throw ShapeError("normal_derivative: sampling domain mismatch");
    BoundaryField out(s.components(), s.per_component());
    for (int j = 0; j < s.components(); ++j)
        for (int k = 0; k < s.per_component(); ++k) {
            Complex w = s.node(j, k);
            out.at(j, k) = (u.complex_derivative(w) * s.interior_normal(j, k)).real();
        }
    return out;
}

/// Green's function g_w0 = -log|w - w0| + regular part, vanishing on the boundary.
struct GreensFunction {
    Complex pole;
    HarmonicRep regular;

    double value(Complex w) const {
        return -std::log(std::abs(w - pole)) + regular.value(w);
    }
    Complex complex_derivative(Complex w) const {
        return -1.0 / (w - pole) + regular.complex_derivative(w);
    }
};

inline GreensFunction greens_function(const CircularDomain& domain, const BoundarySampling& s,
                                      Complex pole, int K, const Tolerances& tol = {}) {
    if (!domain.contains(pole)) throw DomainError("greens_function: pole not in the domain");
    BoundaryField data = BoundaryField::sample(
        s, [pole](Complex w) { return Complex(std::log(std::abs(w - pole))); });
    return GreensFunction{pole, solve_dirichlet_within(domain, s, data, K, tol)};
}

/// Harmonic measure density d(omega_w^)/ds = (1/2pi) dg/dn at the nodes,
/// with the base point as pole. Mass is verified, not enforced.
inline OmegaDensity harmonic_measure_density(const CircularDomain& domain,
                                             const BoundarySampling& s, int K,
                                             const Tolerances& tol = {}) {
    GreensFunction g = greens_function(domain, s, domain.base_point(), K, tol);
    OmegaDensity out;
    out.density = BoundaryField(s.components(), s.per_component());
    for (int j = 0; j < s.components(); ++j)
        for (int k = 0; k < s.per_component(); ++k) {
            Complex w = s.node(j, k);
            double d = (g.complex_derivative(w) * s.interior_normal(j, k)).real() / two_pi;
            if (d <= 0.0)
                throw MassError("harmonic_measure_density: nonpositive density at a node");
            out.density.at(j, k) = d;
        }
    out.mass = integrate_arclength(out.density, s).real();
    if (std::abs(out.mass - 1.0) > tol.mass_defect)
        throw MassError("harmonic_measure_density: mass defect " +
                        std::to_string(std::abs(out.mass - 1.0)));
    return out;
}

/// Harmonic extensions h_j of the component indicators chi_{Gamma_j}, j = 1..n.
inline std::vector<HarmonicRep> harmonic_unit_basis(const CircularDomain& domain,
                                                    const BoundarySampling& s, int K,
                                                    const Tolerances& tol = {}) {
    std::vector<HarmonicRep> units;
    units.reserve(static_cast<std::size_t>(domain.num_holes()));
    for (int j = 1; j <= domain.num_holes(); ++j) {
        BoundaryField data(s.components(), s.per_component());
        for (int k = 0; k < s.per_component(); ++k) data.at(j, k) = 1.0;
        units.push_back(solve_dirichlet_within(domain, s, data, K, tol));
    }
    return units;
}

/// Q_j = (dh_j/dn) / (d omega/ds) at the nodes; the N(Gamma) block basis.
inline std::vector<BoundaryField> q_functions(const std::vector<HarmonicRep>& units,
                                              const OmegaDensity& density,
                                              const BoundarySampling& s) {
    std::vector<BoundaryField> out;
    out.reserve(units.size());
    for (const auto& h : units) {
        BoundaryField dn = normal_derivative(h, s);
        BoundaryField q(s.components(), s.per_component());
        for (int j = 0; j < s.components(); ++j)
            for (int k = 0; k < s.per_component(); ++k)
                q.at(j, k) = dn.at(j, k).real() / density.density.at(j, k).real();
        out.push_back(std::move(q));
    }
    return out;
}

/// Quadrature of f against harmonic measure.
inline Complex integrate_omega(const BoundaryField& f, const OmegaDensity& density,
                               const BoundarySampling& s) {
    require_shape(f, s);
    require_shape(density.density, s);
    Complex acc = 0.0;
    for (int j = 0; j < s.components(); ++j) {
        Complex comp = 0.0;
        for (int k = 0; k < s.per_component(); ++k)
            comp += f.at(j, k) * density.density.at(j, k).real();
        acc += comp * s.weight(j);
    }
    return acc;
}

/// Period of the harmonic conjugate of u around hole j. Computed by quadrature
/// over Gamma_j and cross-checked against the exact value 2*pi*b_j.
inline double period(const HarmonicRep& u, int j, const BoundarySampling& s,
                     const Tolerances& tol = {}) {
    if (j < 1 || j > u.domain.num_holes())
        throw ShapeError("period: hole index out of range");
    double quad = 0.0;
    for (int k = 0; k < s.per_component(); ++k) {
        Complex w = s.node(j, k);
        quad += (u.complex_derivative(w) * s.radial(j, k)).real();
    }
    quad *= s.weight(j);
    double exact = two_pi * u.log_coeffs[static_cast<std::size_t>(j - 1)];
    if (std::abs(quad - exact) > tol.period_mismatch)
        throw PeriodMismatchError("period: quadrature " + std::to_string(quad) +
                                  " vs series " + std::to_string(exact));
    return quad;
}

/// p_{jk} = int_Gamma h_j dh_k/dn ds over the full boundary, interior normal.
inline PeriodMatrix period_matrix(const std::vector<HarmonicRep>& units,
                                  const BoundarySampling& s, const Tolerances& tol = {}) {
    const int n = static_cast<int>(units.size());
    PeriodMatrix pm;
    pm.p.resize(n, n);
    if (n == 0) {  // simply connected: empty period machinery
        pm.min_singular_value = std::numeric_limits<double>::infinity();
        return pm;
    }
    // h_j is the indicator of Gamma_j on the boundary, so the integral reduces
    // to the flux of h_k through Gamma_j.
    for (int k = 0; k < n; ++k) {
        BoundaryField dn = normal_derivative(units[static_cast<std::size_t>(k)], s);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int m = 0; m < s.per_component(); ++m) acc += dn.at(j + 1, m).real();
            pm.p(j, k) = acc * s.weight(j + 1);
        }
    }
    pm.symmetry_defect = (pm.p - pm.p.transpose()).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pm.p);
    pm.min_singular_value = svd.singularValues()(n - 1);
    if (pm.min_singular_value < tol.singular_threshold)
        throw SingularMatrixError("period_matrix: smallest singular value " +
                                  std::to_string(pm.min_singular_value));
    return pm;
}

inline PeriodMatrix period_matrix(const CircularDomain& domain, const BoundarySampling& s,
                                  int K, const Tolerances& tol = {}) {
    return period_matrix(harmonic_unit_basis(domain, s, K, tol), s, tol);
}

/// Coefficients a with Per(u + sum a_j h_j, gamma_j) = 0 for all j.
inline HarmonicUnit conjugation_correction(const HarmonicRep& u, const PeriodMatrix& P,
                                           const BoundarySampling& s,
                                           const Tolerances& tol = {}) {
    const int n = static_cast<int>(P.p.rows());
    if (n == 0) return HarmonicUnit{};
    Eigen::VectorXd rhs(n);
    for (int j = 1; j <= n; ++j) rhs(j - 1) = -period(u, j, s, tol);
    Eigen::VectorXd a = P.p.fullPivLu().solve(rhs);
    HarmonicUnit unit;
    unit.a.assign(a.data(), a.data() + n);
    return unit;
}

/// u + sum_j a_j h_j, combined coefficient-wise.
inline HarmonicRep apply_unit(const HarmonicRep& u, const HarmonicUnit& unit,
                              const std::vector<HarmonicRep>& units) {
    if (unit.a.size() != units.size())
        throw ShapeError("apply_unit: coefficient count mismatch");
    int K = u.K;
    for (const auto& h : units) K = std::max(K, h.K);
    HarmonicRep out(u.domain, K);
    out.axpy(1.0, u);
    out.residual = u.residual;
    out.condition = u.condition;
    for (std::size_t j = 0; j < units.size(); ++j) out.axpy(unit.a[j], units[j]);
    return out;
}

/// Analytic function f with Re f = u and Im f(w^) = 0. Requires all periods
/// (equivalently log coefficients) to be below tolerance.
inline AnalyticRep analytic_completion(const HarmonicRep& u, const Tolerances& tol = {}) {
    for (double b : u.log_coeffs)
        if (std::abs(two_pi * b) > tol.period_mismatch)
            throw NonzeroPeriodError("analytic_completion: residual period " +
                                     std::to_string(two_pi * b));
    AnalyticRep f(u.domain, u.K);
    f.outer_coeffs[0] = u.constant;
    for (int k = 1; k <= u.K; ++k)
        f.outer_coeffs[static_cast<std::size_t>(k)] = u.outer_coeffs[static_cast<std::size_t>(k - 1)];
    for (int j = 0; j < u.domain.num_holes(); ++j)
        f.hole_coeffs[static_cast<std::size_t>(j)] = u.hole_coeffs[static_cast<std::size_t>(j)];
    // Normalize the conjugate: v(w^) = 0.
    f.outer_coeffs[0] -= Complex(0.0, f.value(u.domain.base_point()).imag());
    return f;
}

}  // namespace royden

#endif
