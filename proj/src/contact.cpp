// contact.cpp - tangency solve, implicit derivatives, frame assembly.
#include "hardpair/contact.hpp"

#include <cmath>
#include <sstream>

#include "hardpair/errors.hpp"
#include "hardpair/linalg.hpp"

namespace hardpair {

namespace {

// Support triple of the combined body S(phi) = h(phi) + h(phi - theta + pi).
struct CombinedSupport {
    const Particle* particle;
    double theta;
    void operator()(double phi, double& h, double& h1, double& h2) const {
        double ha, ha1, ha2, hb, hb1, hb2;
        particle->support(phi, ha, ha1, ha2);
        particle->support(phi - theta + M_PI, hb, hb1, hb2);
        h = ha + hb;
        h1 = ha1 + hb1;
        h2 = ha2 + hb2;
    }
};

struct TangencyResult {
    double alpha1, alpha2, d, residual;
    bool converged;
};

// Newton polish of the 3-unknown tangency system
//   b(a1) - R(theta) b(a2) - d e(psi) = 0   (contact points coincide)
//   e(a1)^perp . R(theta) e(a2)      = 0    (normals anti-parallel)
// from a given seed. The normal equation reads -sin(a1 - a2 - theta) = 0 and
// the seed keeps a1 - a2 - theta near pi, the anti-parallel branch.
TangencyResult newton_polish(const Particle& particle, double theta, double psi,
                             double a1, double a2, double d) {
    const Vec2 epsi = unit_vector(psi);
    double residual = 0.0;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        double h1v, h1d, h1dd, h2v, h2d, h2dd;
        particle.support(a1, h1v, h1d, h1dd);
        particle.support(a2, h2v, h2d, h2dd);
        const Vec2 e1 = unit_vector(a1), e2 = unit_vector(a2);
        const Vec2 b1 = h1v * e1 + h1d * e1.perp();
        const Vec2 b2r = rotate(theta, h2v * e2 + h2d * e2.perp());
        const double delta = a1 - a2 - theta;
        const Vec2 rpos = b1 - b2r - d * epsi;
        const double rang = -std::sin(delta);
        residual = std::max(std::max(std::abs(rpos.x), std::abs(rpos.y)), std::abs(rang));
        const double scale = std::max(1.0, std::abs(d));
        if (residual <= 1e-13 * scale) {
            converged = true;
            break;
        }
        const Vec2 c1 = (h1v + h1dd) * e1.perp();
        const Vec2 c2 = -1.0 * rotate(theta, (h2v + h2dd) * unit_vector(a2).perp());
        const double cd = std::cos(delta);
        double A[3][3] = {{c1.x, c2.x, -epsi.x},
                          {c1.y, c2.y, -epsi.y},
                          {-cd, cd, 0.0}};
        double rhs[3] = {-rpos.x, -rpos.y, -rang};
        double dx[3];
        if (!solve3(A, rhs, dx)) break;
        a1 += dx[0];
        a2 += dx[1];
        d += dx[2];
    }
    return {a1, a2, d, residual, converged};
}

// Coarse overlap predicate: the bodies at centre distance d along e(psi) are
// disjoint iff some direction phi separates them, i.e.
// min_phi [S(phi) - d cos(phi - psi)] < 0 on the half-turn window around psi.
bool overlaps_at_distance(const CombinedSupport& S, double psi, double d) {
    auto margin = [&](double phi) {
        double h, h1, h2;
        S(phi, h, h1, h2);
        return h - d * std::cos(phi - psi);
    };
    const double lo = psi - M_PI_2, hi = psi + M_PI_2;
    const int grid = 64;
    double best = 1e300, best_phi = psi;
    for (int i = 0; i <= grid; ++i) {
        const double phi = lo + (hi - lo) * i / grid;
        const double v = margin(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    // golden-section refinement around the coarse minimiser
    const double gr = 0.6180339887498949;
    double a = best_phi - (hi - lo) / grid, b = best_phi + (hi - lo) / grid;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = margin(x1), f2 = margin(x2);
    for (int it = 0; it < 48; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = margin(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = margin(x2);
        }
    }
    best = std::min(best, std::min(f1, f2));
    return best >= 0.0;
}

}  // namespace

ContactSolution closest_approach(const Particle& particle, double theta, double psi) {
    const CombinedSupport S{&particle, theta};

    // Primary seed: the tangency reduces to a monotone scalar root for the
    // combined body's radial direction (see support_ray_angle); this is exact
    // up to the scalar tolerance and Newton only polishes.
    const double astar = support_ray_angle(S, psi);
    double h, h1, h2;
    S(astar, h, h1, h2);
    double d0 = h * std::cos(astar - psi) - h1 * std::sin(astar - psi);
    TangencyResult t =
        newton_polish(particle, theta, psi, astar, astar - theta + M_PI, d0);

    if (!t.converged) {
        // Fallback: bracket d by bisection on the overlap predicate, reseed.
        double dlo = 0.0, dhi = 0.0;
        for (int i = 0; i < 128; ++i) {
            double hv, h1v, h2v;
            S(kTwoPi * i / 128.0, hv, h1v, h2v);
            dlo = (i == 0) ? hv : std::min(dlo, hv);
            dhi = std::max(dhi, hv);
        }
        dlo *= 0.99;  // certainly overlapping: below the inradius of the body
        dhi *= 1.01;  // certainly disjoint: beyond its circumradius
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (dlo + dhi);
            if (overlaps_at_distance(S, psi, mid)) dlo = mid; else dhi = mid;
        }
        const double dmid = 0.5 * (dlo + dhi);
        const double aseed = support_ray_angle(S, psi);
        t = newton_polish(particle, theta, psi, aseed, aseed - theta + M_PI, dmid);
        if (!t.converged) {
            std::ostringstream os;
            os << "contact tangency solve failed to converge: theta=" << theta
               << " psi=" << psi << " bracket=[" << dlo << ", " << dhi
               << "] residual=" << t.residual;
            throw NumericalError(os.str());
        }
    }

    ContactSolution sol;
    sol.d = t.d;
    sol.alpha_self = wrap_angle(t.alpha1);
    sol.alpha_other = wrap_angle(t.alpha2);
    sol.newton_residual = t.residual;
    return sol;
}

ContactDerivatives closest_approach_gradient(const Particle& particle, double theta,
                                             double psi, const ContactSolution& sol) {
    double h1v, h1d, h1dd, h2v, h2d, h2dd;
    particle.support(sol.alpha_self, h1v, h1d, h1dd);
    particle.support(sol.alpha_other, h2v, h2d, h2dd);
    const Vec2 e1 = unit_vector(sol.alpha_self), e2 = unit_vector(sol.alpha_other);
    const Vec2 epsi = unit_vector(psi);
    const Vec2 c1 = (h1v + h1dd) * e1.perp();
    const Vec2 c2 = -1.0 * rotate(theta, (h2v + h2dd) * e2.perp());
    const double cd = std::cos(sol.alpha_self - sol.alpha_other - theta);
    const Vec2 b2 = h2v * e2 + h2d * e2.perp();

    // Differentiate the tangency residual in the frame parameter s and solve
    // J dX/ds = -dr/ds; the d-derivative is the third component.
    auto solve_for = [&](Vec2 dr_pos, double dr_ang) {
        double A[3][3] = {{c1.x, c2.x, -epsi.x},
                          {c1.y, c2.y, -epsi.y},
                          {-cd, cd, 0.0}};
        double rhs[3] = {-dr_pos.x, -dr_pos.y, -dr_ang};
        double dx[3];
        if (!solve3(A, rhs, dx))
            throw NumericalError("tangency Jacobian is singular in derivative solve");
        return dx[2];
    };

    ContactDerivatives g;
    // r depends on psi only through -d e(psi): dr/dpsi = [-d e(psi)^perp; 0].
    g.dd_dpsi = solve_for(-sol.d * epsi.perp(), 0.0);
    // r depends on theta through -R(theta) b(a2) and the normal equation:
    // d/dtheta [R(theta) x] = R(theta) x^perp; d/dtheta [-sin(a1-a2-theta)] = cos.
    g.dd_dtheta = solve_for(-1.0 * rotate(theta, b2.perp()), cd);
    return g;
}

ContactDerivatives closest_approach_gradient(const Particle& particle, double theta,
                                             double psi) {
    return closest_approach_gradient(particle, theta, psi,
                                     closest_approach(particle, theta, psi));
}

CollisionFrame collision_frame(const Particle& particle, double theta1, double theta2,
                               double psi) {
    const double theta = theta2 - theta1;
    const double phi = psi - theta1;  // reduced elevation
    const ContactSolution sol = closest_approach(particle, theta, phi);
    const ContactDerivatives grad = closest_approach_gradient(particle, theta, phi, sol);

    CollisionFrame f;
    f.theta1 = wrap_angle(theta1);
    f.theta2 = wrap_angle(theta2);
    f.psi = wrap_angle(psi);
    f.d = sol.d;
    f.dd_dpsi = grad.dd_dpsi;
    f.dd_dtheta = grad.dd_dtheta;

    const Vec2 epsi = unit_vector(psi);
    f.p = rotate(theta1, particle.boundary_point(sol.alpha_self));
    f.q = f.p - sol.d * epsi;
    f.n = unit_vector(sol.alpha_self + theta1);
    const Vec2 Ntil = epsi - (grad.dd_dpsi / sol.d) * epsi.perp();
    f.N = (1.0 / Ntil.norm()) * Ntil;
    f.r = -grad.dd_dtheta * epsi.perp();
    f.alpha_self = wrap_angle(sol.alpha_self + theta1);
    f.alpha_other = wrap_angle(sol.alpha_other + theta2);
    return f;
}

double separation(const Particle& particle, Vec2 x, double theta1, Vec2 xbar,
                  double theta2) {
    const Vec2 w = xbar - x;
    const double dist = w.norm();
    if (!(dist > 0.0)) throw ConfigError("separation undefined for coincident centres");
    const double psi = std::atan2(w.y, w.x);
    const ContactSolution sol =
        closest_approach(particle, theta2 - theta1, psi - theta1);
    return dist - sol.d;
}

ContactBounds contact_derivative_bounds(const Particle& particle) {
    if (particle.is_disk()) return {0.0, 0.0};
    ContactBounds b;
    const int grid = 48;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double theta = kTwoPi * i / grid;
            const double psi = kTwoPi * j / grid;
            const ContactDerivatives g = closest_approach_gradient(particle, theta, psi);
            b.g_psi = std::max(b.g_psi, std::abs(g.dd_dpsi));
            b.g_theta = std::max(b.g_theta, std::abs(g.dd_dtheta));
        }
    }
    // pad the grid maxima; the event stepper applies its own safety factor too
    b.g_psi *= 1.5;
    b.g_theta *= 1.5;
    return b;
}

}  // namespace hardpair
