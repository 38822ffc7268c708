// shape.hpp - reference particle: strictly convex planar body with two-axis
// mirror symmetry, described by its support function h(phi).
//
// Boundary parametrization by outward-normal angle a:
//   point(a)  = h(a) e(a) + h'(a) e(a)^perp,   normal(a) = e(a),
// with curvature radius h + h'' > 0 (strict convexity). All three supported
// families keep h positive, pi-periodic and even, which gives the required
// symmetry under reflection in either axis.
#pragma once

#include <string>
#include <vector>

#include "hardpair/vec.hpp"

namespace hardpair {

enum class ShapeKind { disk, ellipse, fourier };

class Particle {
  public:
    // h = radius.
    static Particle disk(double radius, double density = 1.0);
    // h(phi) = sqrt(a^2 cos^2 phi + b^2 sin^2 phi).
    static Particle ellipse(double a, double b, double density = 1.0);
    // h(phi) = c[0] + sum_k c[k] cos(2 k phi).
    static Particle fourier(std::vector<double> cos_coeffs, double density = 1.0);

    ShapeKind kind() const { return kind_; }
    bool is_disk() const { return kind_ == ShapeKind::disk; }
    double density() const { return density_; }
    double mass() const { return mass_; }
    double inertia() const { return inertia_; }
    const std::vector<double>& params() const { return params_; }
    std::string kind_name() const;

    // Support function and first two derivatives at normal angle phi.
    void support(double phi, double& h, double& h1, double& h2) const;
    double support(double phi) const;

    Vec2 boundary_point(double alpha) const;
    Vec2 boundary_normal(double alpha) const { return unit_vector(alpha); }

    // Cached boundary extremes (dense-grid values from construction).
    double support_min() const { return h_min_; }
    double support_max() const { return h_max_; }
    double reach() const { return reach_; }  // max |boundary_point|

  private:
    Particle() = default;
    void validate_and_finish();

    ShapeKind kind_ = ShapeKind::disk;
    std::vector<double> params_;
    double density_ = 1.0;
    double mass_ = 0.0, inertia_ = 0.0;
    double h_min_ = 0.0, h_max_ = 0.0, reach_ = 0.0;
};

struct MassProperties {
    double m, J;
};

// Fixed-order Gauss-Legendre product rule over the polar decomposition
// {(rho, phi) : 0 <= rho <= boundary radius at phi}. Matches closed forms for
// disk/ellipse to 1e-10 at the chosen panel count.
MassProperties mass_properties(const Particle& particle);

// Angle a in (phi - pi/2, phi + pi/2) at which the boundary point of a body
// with support pair provider s lies on the ray e(phi):
// solves g(a) = h(a) sin(a-phi) + h'(a) cos(a-phi) = 0, which is strictly
// increasing on that window (g' = (h+h'') cos(a-phi) > 0) and brackets the
// root since g(phi -+ pi/2) = -+h. Newton with bisection safeguard.
// SupportFn: void(double a, double& h, double& h1, double& h2).
template <class SupportFn>
double support_ray_angle(SupportFn&& s, double phi) {
    double lo = phi - M_PI_2, hi = phi + M_PI_2;
    double a = phi, h, h1, h2;
    for (int it = 0; it < 100; ++it) {
        s(a, h, h1, h2);
        const double sn = std::sin(a - phi), cs = std::cos(a - phi);
        const double g = h * sn + h1 * cs;
        const double dg = (h + h2) * cs;
        if (g > 0.0) hi = a; else lo = a;
        if (std::abs(g) <= 1e-15 * (std::abs(h) + std::abs(h1))) break;
        double step = (dg > 0.0) ? -g / dg : 0.0;
        double next = a + step;
        if (step == 0.0 || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (hi - lo < 1e-16) break;
        a = next;
    }
    return a;
}

// Radial extent along e(phi) for the same support provider.
template <class SupportFn>
double support_ray_radius(SupportFn&& s, double phi) {
    const double a = support_ray_angle(s, phi);
    double h, h1, h2;
    s(a, h, h1, h2);
    return h * std::cos(a - phi) - h1 * std::sin(a - phi);
}

}  // namespace hardpair
