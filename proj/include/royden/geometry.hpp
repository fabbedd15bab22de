#ifndef ROYDEN_GEOMETRY_HPP
#define ROYDEN_GEOMETRY_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace royden {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Error hierarchy. Config/geometry problems and numerical failures are kept
// apart so the CLI can map them to distinct exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverlapError : ConfigError { using ConfigError::ConfigError; };
struct ContainmentError : ConfigError { using ConfigError::ConfigError; };
struct BasePointError : ConfigError { using ConfigError::ConfigError; };
struct ResolutionError : ConfigError { using ConfigError::ConfigError; };

struct ShapeError : NumericalError { using NumericalError::NumericalError; };
struct DomainError : NumericalError { using NumericalError::NumericalError; };

struct Circle {
    Complex center;
    double radius = 0.0;
};

/// Circular multiply connected domain: one outer circle, n >= 1 hole circles,
/// and a base point inside the domain. Component 0 is the outer boundary.
class CircularDomain {
public:
    CircularDomain(Circle outer, std::vector<Circle> holes, Complex base_point)
        : outer_(outer), holes_(std::move(holes)), base_point_(base_point) {
        validate();
    }

    const Circle& outer() const { return outer_; }
    const std::vector<Circle>& holes() const { return holes_; }
    Complex base_point() const { return base_point_; }

    int num_holes() const { return static_cast<int>(holes_.size()); }
    int num_components() const { return num_holes() + 1; }

    /// Boundary component j: 0 is the outer circle, j >= 1 the hole circles.
    const Circle& component(int j) const {
        return j == 0 ? outer_ : holes_.at(static_cast<std::size_t>(j - 1));
    }

    double total_circumference() const {
        double s = two_pi * outer_.radius;
        for (const auto& h : holes_) s += two_pi * h.radius;
        return s;
    }

    /// True when w lies in the open domain with clearance `margin` from every
    /// boundary circle.
    bool contains(Complex w, double margin = 0.0) const {
        if (std::abs(w - outer_.center) >= outer_.radius - margin) return false;
        for (const auto& h : holes_)
            if (std::abs(w - h.center) <= h.radius + margin) return false;
        return true;
    }

    double distance_to_boundary(Complex w) const {
        double d = outer_.radius - std::abs(w - outer_.center);
        for (const auto& h : holes_)
            d = std::min(d, std::abs(w - h.center) - h.radius);
        return d;
    }

private:
    void validate() const {
        if (outer_.radius <= 0.0)
            throw ContainmentError("outer radius must be positive");
        for (std::size_t j = 0; j < holes_.size(); ++j) {
            const Circle& h = holes_[j];
            if (h.radius <= 0.0)
                throw ContainmentError("hole " + std::to_string(j + 1) +
                                       " radius must be positive");
            if (std::abs(h.center - outer_.center) + h.radius >= outer_.radius)
                throw ContainmentError("hole " + std::to_string(j + 1) +
                                       " is not strictly inside the outer circle");
        }
        for (std::size_t j = 0; j < holes_.size(); ++j)
            for (std::size_t k = j + 1; k < holes_.size(); ++k) {
                double gap = std::abs(holes_[j].center - holes_[k].center) -
                             holes_[j].radius - holes_[k].radius;
                if (gap <= 0.0)
                    throw OverlapError("holes " + std::to_string(j + 1) + " and " +
                                       std::to_string(k + 1) + " intersect or touch");
            }
        if (!contains(base_point_))
            throw BasePointError("base point is not inside the domain");
    }

    Circle outer_;
    std::vector<Circle> holes_;
    Complex base_point_;
};

/// Equiangular nodes on every boundary circle with trapezoidal arclength
/// weights ds = r * 2*pi/M. The same node count M is used on each component.
class BoundarySampling {
public:
    BoundarySampling(const CircularDomain& domain, int nodes_per_component)
        : domain_(domain), per_component_(nodes_per_component) {
        if (per_component_ < 8 || per_component_ % 2 != 0)
            throw ResolutionError("nodes per component must be even and >= 8");
        nodes_.resize(static_cast<std::size_t>(domain.num_components()));
        for (int j = 0; j < domain.num_components(); ++j) {
            const Circle& c = domain.component(j);
            auto& row = nodes_[static_cast<std::size_t>(j)];
            row.reserve(static_cast<std::size_t>(per_component_));
            for (int k = 0; k < per_component_; ++k) {
                double t = two_pi * k / per_component_;
                row.push_back(c.center + c.radius * Complex(std::cos(t), std::sin(t)));
            }
        }
    }

    const CircularDomain& domain() const { return domain_; }
    int per_component() const { return per_component_; }
    int components() const { return domain_.num_components(); }
    int total_nodes() const { return components() * per_component_; }

    Complex node(int j, int k) const {
        return nodes_[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    /// Arclength weight, constant per component.
    double weight(int j) const {
        return domain_.component(j).radius * two_pi / per_component_;
    }
    double angle(int k) const { return two_pi * k / per_component_; }

    /// Outward unit vector from the component's own center at node (j,k).
    Complex radial(int j, int k) const {
        const Circle& c = domain_.component(j);
        return (node(j, k) - c.center) / c.radius;
    }

    /// Unit normal at node (j,k) pointing into the domain: inward on the outer
    /// circle, away from the hole center on hole circles.
    Complex interior_normal(int j, int k) const {
        return j == 0 ? -radial(j, k) : radial(j, k);
    }

private:
    const CircularDomain domain_;
    int per_component_;
    std::vector<std::vector<Complex>> nodes_;
};

/// Complex-valued samples on the boundary, one row per component, matching a
/// BoundarySampling's node layout.
struct BoundaryField {
    std::vector<std::vector<Complex>> values;

    BoundaryField() = default;
    BoundaryField(int components, int per_component)
        : values(static_cast<std::size_t>(components),
                 std::vector<Complex>(static_cast<std::size_t>(per_component))) {}

    int components() const { return static_cast<int>(values.size()); }
    int per_component() const {
        return values.empty() ? 0 : static_cast<int>(values.front().size());
    }

    Complex& at(int j, int k) {
        return values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    Complex at(int j, int k) const {
        return values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }

    static BoundaryField sample(const BoundarySampling& s,
                                const std::function<Complex(Complex)>& f) {
        BoundaryField out(s.components(), s.per_component());
        for (int j = 0; j < s.components(); ++j)
            for (int k = 0; k < s.per_component(); ++k)
                out.at(j, k) = f(s.node(j, k));
        return out;
    }

    BoundaryField map(const std::function<Complex(Complex)>& f) const {
        BoundaryField out = *this;
        for (auto& row : out.values)
            for (auto& v : row) v = f(v);
        return out;
    }
};

inline void require_shape(const BoundaryField& f, const BoundarySampling& s) {
    if (f.components() != s.components() || f.per_component() != s.per_component())
        throw ShapeError("boundary field does not match sampling layout");
}

/// Trapezoidal quadrature of f against arclength over the whole boundary.
/// Spectrally accurate for smooth data on circles.
inline Complex integrate_arclength(const BoundaryField& f, const BoundarySampling& s) {
    require_shape(f, s);
    Complex acc = 0.0;
    for (int j = 0; j < s.components(); ++j) {
        Complex comp = 0.0;
        for (int k = 0; k < s.per_component(); ++k) comp += f.at(j, k);
        acc += comp * s.weight(j);
    }
    return acc;
}

}  // namespace royden

#endif
