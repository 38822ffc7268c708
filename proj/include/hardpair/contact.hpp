// contact.hpp - distance of closest approach, its derivatives, and the
// collision frame (d, p, q, n, N, r) for a pair of identical particles.
//
// Reference configuration: one copy unrotated at the origin, the other
// rotated by theta with its centre on the ray e(psi). The touching centre
// distance d_theta(psi) is the radial extent along e(psi) of the combined
// body with support S(phi) = h(phi) + h(phi - theta + pi), because the two
// boundaries share a point with anti-parallel outward normals exactly when
// the centre offset lies on the boundary of that body.
#pragma once

#include "hardpair/shape.hpp"
#include "hardpair/vec.hpp"

namespace hardpair {

struct ContactSolution {
    double d = 0.0;             // touching centre distance
    double alpha_self = 0.0;    // normal angle of the contact point, origin copy
    double alpha_other = 0.0;   // normal angle on the rotated copy
    double newton_residual = 0.0;
};

struct ContactDerivatives {
    double dd_dpsi = 0.0;
    double dd_dtheta = 0.0;
};

// Tangency solve for the reference configuration.
ContactSolution closest_approach(const Particle& particle, double theta, double psi);

// Partial derivatives of d_theta(psi) by implicit differentiation of the
// converged tangency system.
ContactDerivatives closest_approach_gradient(const Particle& particle, double theta,
                                             double psi);
ContactDerivatives closest_approach_gradient(const Particle& particle, double theta,
                                             double psi, const ContactSolution& sol);

// Full collision frame at beta = (theta1, theta2, psi): reference quantities
// at (theta2 - theta1, psi - theta1) rotated by theta1.
struct CollisionFrame {
    double theta1 = 0.0, theta2 = 0.0, psi = 0.0;  // beta
    double d = 0.0;
    Vec2 p, q;     // contact point from each centre; q = p - d e(psi)
    Vec2 n, N;     // contact normal, exclusion normal (unit)
    Vec2 r;        // -dd_dtheta * e(psi)^perp
    double dd_dpsi = 0.0, dd_dtheta = 0.0;
    double alpha_self = 0.0, alpha_other = 0.0;  // world normal angles
};

CollisionFrame collision_frame(const Particle& particle, double theta1, double theta2,
                               double psi);

// Signed separation F = |xbar - x| - d(theta2-theta1, angle(xbar - x) - theta1).
// Positive iff disjoint, zero at single-point contact.
double separation(const Particle& particle, Vec2 x, double theta1, Vec2 xbar,
                  double theta2);

// Dense-grid maxima of |dd/dpsi| and |dd/dtheta| over (theta, psi), padded;
// used as speed bounds by the event detector.
struct ContactBounds {
    double g_psi = 0.0;
    double g_theta = 0.0;
};
ContactBounds contact_derivative_bounds(const Particle& particle);

}  // namespace hardpair
