#include <cmath>

#include "doctest.h"
#include "hardpair/contact.hpp"
#include "hardpair/errors.hpp"
#include "hardpair/rng.hpp"
#include "hardpair/shape.hpp"
#include "oracles.hpp"

using namespace hardpair;

namespace {

Particle bumpy() { return Particle::fourier({1.0, 0.15, -0.03}); }

}  // namespace

TEST_SUITE("contact") {

TEST_CASE("disk touching distance is twice the radius for every configuration") {
    const Particle p = Particle::disk(0.75);
    Rng rng(21);
    for (int i = 0; i < 40; ++i) {
        const double theta = rng.angle(), psi = rng.angle();
        const ContactSolution s = closest_approach(p, theta, psi);
        CHECK(s.d == doctest::Approx(1.5).epsilon(1e-13));
        CHECK(s.newton_residual < 1e-12);
        const ContactDerivatives g = closest_approach_gradient(p, theta, psi, s);
        CHECK(std::abs(g.dd_dpsi) < 1e-12);
        CHECK(std::abs(g.dd_dtheta) < 1e-12);
    }
}

TEST_CASE("ellipse touching distance agrees with the bisection oracle") {
    const Particle p = Particle::ellipse(2.0, 1.0);
    Rng rng(22);
    for (int i = 0; i < 120; ++i) {
        const double theta = rng.angle(), psi = rng.angle();
        const double d = closest_approach(p, theta, psi).d;
        const double d_ref = oracles::distance_by_bisection(p, theta, psi);
        CHECK(d == doctest::Approx(d_ref).epsilon(1e-9));
    }
}

TEST_CASE("fourier-shape touching distance agrees with the bisection oracle") {
    const Particle p = bumpy();
    Rng rng(23);
    for (int i = 0; i < 40; ++i) {
        const double theta = rng.angle(), psi = rng.angle();
        const double d = closest_approach(p, theta, psi).d;
        const double d_ref = oracles::distance_by_bisection(p, theta, psi);
        CHECK(d == doctest::Approx(d_ref).epsilon(1e-9));
    }
}

TEST_CASE("touching distance is pi-periodic in both arguments") {
    const Particle p = Particle::ellipse(1.8, 0.9);
    Rng rng(24);
    for (int i = 0; i < 25; ++i) {
        const double theta = rng.angle(), psi = rng.angle();
        const double d = closest_approach(p, theta, psi).d;
        CHECK(closest_approach(p, theta, psi + M_PI).d ==
              doctest::Approx(d).epsilon(1e-12));
        CHECK(closest_approach(p, theta + M_PI, psi).d ==
              doctest::Approx(d).epsilon(1e-12));
    }
}

TEST_CASE("implicit-differentiation gradient matches central differences") {
    Rng rng(25);
    for (const Particle& p : {Particle::ellipse(2.0, 1.0), bumpy()}) {
        for (int i = 0; i < 30; ++i) {
            const double theta = rng.angle(), psi = rng.angle();
            const ContactDerivatives g = closest_approach_gradient(p, theta, psi);
            const double fd_psi = oracles::central_difference(
                [&](double x) { return closest_approach(p, theta, x).d; }, psi);
            const double fd_theta = oracles::central_difference(
                [&](double x) { return closest_approach(p, x, psi).d; }, theta);
            CHECK(g.dd_dpsi == doctest::Approx(fd_psi).epsilon(1e-6));
            CHECK(g.dd_dtheta == doctest::Approx(fd_theta).epsilon(1e-6));
        }
    }
}

TEST_CASE("collision frame satisfies its internal construction identities") {
    Rng rng(26);
    for (const Particle& p : {Particle::ellipse(2.0, 1.0), bumpy()}) {
        for (int i = 0; i < 30; ++i) {
            const double t1 = rng.angle(), t2 = rng.angle(), psi = rng.angle();
            const CollisionFrame f = collision_frame(p, t1, t2, psi);
            const Vec2 e = unit_vector(f.psi);
            CHECK((f.q - (f.p - f.d * e)).norm() < 1e-12);
            CHECK(f.n.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(f.N.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((f.r - (-f.dd_dtheta) * e.perp()).norm() < 1e-12);
            // contact point lies on body 1's boundary: support consistency
            CHECK(f.p.dot(f.n) ==
                  doctest::Approx(p.support(f.alpha_self - t1)).epsilon(1e-11));
            // from the second centre the same point has the opposite normal
            CHECK(f.q.dot(unit_vector(f.alpha_other)) ==
                  doctest::Approx(p.support(f.alpha_other - t2)).epsilon(1e-11));
            CHECK((unit_vector(f.alpha_other) + f.n).norm() < 1e-10);
        }
    }
}

TEST_CASE("collision frame is covariant under global rotations") {
    const Particle p = Particle::ellipse(2.0, 1.0);
    Rng rng(27);
    for (int i = 0; i < 20; ++i) {
        const double t1 = rng.angle(), t2 = rng.angle(), psi = rng.angle();
        const double delta = rng.angle();
        const CollisionFrame f = collision_frame(p, t1, t2, psi);
        const CollisionFrame g = collision_frame(p, t1 + delta, t2 + delta, psi + delta);
        CHECK(g.d == doctest::Approx(f.d).epsilon(1e-11));
        CHECK(g.dd_dpsi == doctest::Approx(f.dd_dpsi).epsilon(1e-8));
        CHECK(g.dd_dtheta == doctest::Approx(f.dd_dtheta).epsilon(1e-8));
        CHECK((g.p - rotate(delta, f.p)).norm() < 1e-9);
        CHECK((g.q - rotate(delta, f.q)).norm() < 1e-9);
        CHECK((g.n - rotate(delta, f.n)).norm() < 1e-9);
        CHECK((g.N - rotate(delta, f.N)).norm() < 1e-9);
        CHECK((g.r - rotate(delta, f.r)).norm() < 1e-9);
    }
}

TEST_CASE("normal-identity: d e(psi)^perp . Ntilde equals -dd/dpsi") {
    const Particle p = Particle::ellipse(2.0, 1.0);
    Rng rng(28);
    for (int i = 0; i < 20; ++i) {
        const double t1 = rng.angle(), t2 = rng.angle(), psi = rng.angle();
        const CollisionFrame f = collision_frame(p, t1, t2, psi);
        const Vec2 e = unit_vector(f.psi);
        const Vec2 ntilde = e - (f.dd_dpsi / f.d) * e.perp();
        const double fd = oracles::central_difference(
            [&](double x) { return closest_approach(p, t2 - t1, x - t1).d; }, psi);
        CHECK(f.d * e.perp().dot(ntilde) == doctest::Approx(-fd).epsilon(1e-6));
    }
}

TEST_CASE("separation sign matches the oracle overlap predicate") {
    const Particle p = Particle::ellipse(2.0, 1.0);
    Rng rng(29);
    for (int i = 0; i < 25; ++i) {
        const double t1 = rng.angle(), t2 = rng.angle(), psi = rng.angle();
        const double d = closest_approach(p, t2 - t1, psi - t1).d;
        for (double eps : {1e-3, 1e-2, 1e-1}) {
            const Vec2 xbar_out = (d + eps) * unit_vector(psi);
            const Vec2 xbar_in = (d - eps) * unit_vector(psi);
            CHECK(separation(p, Vec2{0, 0}, t1, xbar_out, t2) > 0.0);
            CHECK(separation(p, Vec2{0, 0}, t1, xbar_in, t2) < 0.0);
            CHECK(oracles::disjoint_at(p, t2 - t1, psi - t1, d + eps));
            CHECK_FALSE(oracles::disjoint_at(p, t2 - t1, psi - t1, d - eps));
        }
    }
}

TEST_CASE("separation rejects coincident centres") {
    const Particle p = Particle::disk(1.0);
    CHECK_THROWS_AS(separation(p, Vec2{1.0, 2.0}, 0.0, Vec2{1.0, 2.0}, 0.0),
                    ConfigError);
}

TEST_CASE("derivative bounds dominate sampled derivatives") {
    const Particle disk = Particle::disk(1.0);
    const ContactBounds db = contact_derivative_bounds(disk);
    CHECK(db.g_psi == 0.0);
    CHECK(db.g_theta == 0.0);

    const Particle p = Particle::ellipse(2.0, 1.0);
    const ContactBounds b = contact_derivative_bounds(p);
    CHECK(b.g_psi > 0.0);
    CHECK(b.g_theta > 0.0);
    Rng rng(30);
    for (int i = 0; i < 60; ++i) {
        const ContactDerivatives g =
            closest_approach_gradient(p, rng.angle(), rng.angle());
        CHECK(std::abs(g.dd_dpsi) <= b.g_psi);
        CHECK(std::abs(g.dd_dtheta) <= b.g_theta);
    }
}

}  // TEST_SUITE
