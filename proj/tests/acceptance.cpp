// Acceptance gate: one PASS/FAIL line per criterion with measured values and
// the pinned tolerances. Exit code is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hardpair/contact.hpp"
#include "hardpair/dynamics.hpp"
#include "hardpair/errors.hpp"
#include "hardpair/invariants.hpp"
#include "hardpair/rng.hpp"
#include "hardpair/scatter.hpp"
#include "hardpair/shape.hpp"
#include "hardpair/vec.hpp"
#include "oracles.hpp"

using namespace hardpair;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point origin = clock::now();
    return std::chrono::duration<double>(clock::now() - origin).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

Vec6 random_velocity(Rng& rng) {
    Vec6 V;
    for (int i = 0; i < 6; ++i) V[i] = rng.normal();
    return V;
}

Vec6 manifold_velocity(Rng& rng, double m) {
    for (;;) {
        const Vec6 V = random_velocity(rng);
        const EnergyMomentum ep = energy_momentum(V, m, 1.0);
        if (ep.e * ep.e > ep.p.norm2() / (2.0 * m) + 0.1) return V;
    }
}

double max_abs_diff(const Mat6& a, const Mat6& b) {
    double best = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            best = std::max(best, std::abs(a(i, j) - b(i, j)));
    return best;
}

// ---------------------------------------------------------------------------

Outcome criterion_1_conservation() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const double m = ell.mass(), J = ell.inertia();
    const double t0 = now_seconds();
    Rng rng(1001);
    double worst_p = 0.0, worst_e = 0.0;
    const int n = 10000;
    for (int k = 0; k < n; ++k) {
        const CollisionFrame f =
            collision_frame(ell, rng.angle(), rng.angle(), rng.angle());
        const Mat6 S = physical_scattering(f, m, J);
        const Vec6 V = random_velocity(rng);
        const Vec6 W = S * V;
        worst_p = std::max(worst_p,
                           m * std::max(std::abs((W[0] + W[2]) - (V[0] + V[2])),
                                        std::abs((W[1] + W[3]) - (V[1] + V[3]))));
        const auto energy = [&](const Vec6& u) {
            return m * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) +
                   J * (u[4] * u[4] + u[5] * u[5]);
        };
        worst_e = std::max(worst_e,
                           std::abs(energy(W) - energy(V)) / energy(V));
    }
    const double elapsed = now_seconds() - t0;
    Outcome o;
    o.pass = worst_p <= 1e-10 && worst_e <= 1e-9 && elapsed < 10.0;
    o.detail = "momentum err " + fmt(worst_p) + " (tol 1e-10), energy rel err " +
               fmt(worst_e) + " (tol 1e-9) over 10000 random ellipse scatters in " +
               fmt(elapsed) + " s (limit 10 s)";
    return o;
}

Outcome criterion_2_involution() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const double m = ell.mass(), J = ell.inertia();
    const Mat6 M = mass_matrix(m, J), Mi = mass_matrix_inverse(m, J);
    Rng rng(1001);  // same sampling stream as criterion 1
    double worst_inv = 0.0, worst_orth = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const CollisionFrame f =
            collision_frame(ell, rng.angle(), rng.angle(), rng.angle());
        const Mat6 S = physical_scattering(f, m, J);
        (void)random_velocity(rng);
        worst_inv = std::max(worst_inv, max_abs_diff(S * S, Mat6::identity()));
        const Mat6 R = M * S * Mi;
        worst_orth =
            std::max(worst_orth, max_abs_diff(R.transposed() * R, Mat6::identity()));
    }
    Outcome o;
    o.pass = worst_inv <= 1e-10 && worst_orth <= 1e-10;
    o.detail = "involution err " + fmt(worst_inv) + ", kinetic-metric orthogonality err " +
               fmt(worst_orth) + " (tol 1e-10) on the same 10000 frames";
    return o;
}

Outcome criterion_3_disk_block() {
    const Particle disk = Particle::disk(1.0);
    const double m = disk.mass(), J = disk.inertia();
    Rng rng(1003);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const CollisionFrame f =
            collision_frame(disk, rng.angle(), rng.angle(), rng.angle());
        const Mat6 S = physical_scattering(f, m, J);
        const Mat4 B = disk_scattering(f.psi);
        Mat6 expected = Mat6::identity();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) expected(i, j) = B(i, j);
        worst = std::max(worst, max_abs_diff(S, expected));
    }
    Outcome o;
    o.pass = worst <= 1e-10;
    o.detail = "disk scattering vs translational block + spin identity: entrywise err " +
               fmt(worst) + " (tol 1e-10) over 1000 random configurations";
    return o;
}

Outcome criterion_4_contact_oracle() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    Rng rng(1004);
    double worst_d = 0.0, worst_id = 0.0;
    const int n = 1000;
    for (int k = 0; k < n; ++k) {
        const double theta = rng.angle(), psi = rng.angle();
        const double d = closest_approach(ell, theta, psi).d;
        const double ref = oracles::distance_by_bisection(ell, theta, psi);
        worst_d = std::max(worst_d, std::abs(d - ref));

        // derivative identity d e(psi)^perp . Ntilde = -dd/dpsi, with the
        // right side re-measured by central differences
        const ContactDerivatives grad = closest_approach_gradient(ell, theta, psi);
        const double fd = oracles::central_difference(
            [&](double s) { return closest_approach(ell, theta, s).d; }, psi);
        const Vec2 e = unit_vector(psi);
        const Vec2 ntilde = e - (grad.dd_dpsi / d) * e.perp();
        worst_id = std::max(worst_id, std::abs(d * e.perp().dot(ntilde) + fd));
    }
    Outcome o;
    o.pass = worst_d <= 1e-8 && worst_id <= 1e-6;
    o.detail = "closest approach vs overlap-bisection oracle: err " + fmt(worst_d) +
               " (tol 1e-8); exclusion-normal derivative identity err " + fmt(worst_id) +
               " (tol 1e-6) on 1000 random (theta, psi)";
    return o;
}

Outcome criterion_5_dynamics() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const double m = ell.mass(), J = ell.inertia();
    Rng rng(1005);
    double worst_e = 0.0, worst_p = 0.0, worst_pen = 0.0;
    long total_events = 0;
    bool finite = true;
    const double reach = 2.0 * ell.support_max();
    SimulateOptions opts;
    opts.sample_dt = 0.1;
    for (int k = 0; k < 100; ++k) {
        SystemState s0;
        s0.x = Vec2{-0.7 * reach - rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0)};
        s0.xbar = Vec2{0.7 * reach + rng.uniform(0.0, 2.0), rng.uniform(-1.0, 1.0)};
        s0.theta1 = rng.angle();
        s0.theta2 = rng.angle();
        s0.V = Vec6{1.0 + 0.3 * rng.normal(), 0.3 * rng.normal(),
                    -1.0 + 0.3 * rng.normal(), 0.3 * rng.normal(),
                    0.5 * rng.normal(), 0.5 * rng.normal()};
        const Trajectory traj = simulate(ell, s0, 10.0, ScatterFamily::physical, opts);
        total_events += static_cast<long>(traj.events.size());
        finite = finite && !traj.penetration_detected &&
                 traj.events.size() < static_cast<std::size_t>(opts.max_events);
        const ConservedQuantities q0 = conserved_quantities(s0, m, J);
        for (const TrajectorySample& smp : traj.samples) {
            worst_e = std::max(worst_e, std::abs(smp.q.E - q0.E) / q0.E);
            worst_p = std::max(worst_p,
                               std::max(std::abs(smp.q.P.x - q0.P.x),
                                        std::abs(smp.q.P.y - q0.P.y)) /
                                   std::sqrt(m * q0.E));
        }
        worst_pen = std::min(worst_pen, min_separation_scan(ell, traj, 1e-3));
    }

    // analytic event time for the head-on unit-disk pair launched 2 apart
    const Particle disk = Particle::disk(1.0);
    SystemState head;
    head.x = Vec2{-2.0, 0.0};
    head.xbar = Vec2{2.0, 0.0};
    head.V = Vec6{1, 0, -1, 0, 0, 0};
    const Trajectory ht = simulate(disk, head, 3.0, ScatterFamily::physical, opts);
    const double event_err =
        ht.events.size() == 1 ? std::abs(ht.events[0].time - 1.0) : 1.0;

    Outcome o;
    o.pass = worst_e <= 1e-9 && worst_p <= 1e-9 && worst_pen >= -1e-8 && finite &&
             event_err <= 1e-9;
    std::ostringstream os;
    os << "100 ellipse-pair runs to T=10: energy drift " << fmt(worst_e)
       << ", momentum drift " << fmt(worst_p) << " (tol 1e-9 rel), scanned min separation "
       << fmt(worst_pen) << " (floor -1e-8), " << total_events
       << " events all finite; head-on disk event at |t-1| = " << fmt(event_err)
       << " (tol 1e-9)";
    o.detail = os.str();
    return o;
}

Outcome criterion_6_witness() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const double m = ell.mass(), J = ell.inertia();
    const std::optional<UnphysicalWitness> w = find_unphysical_witness(ell, m, J, 300);
    double uv_err = 1.0, gdotv = 0.0, flight = 1.0;
    if (w) {
        const CollisionFrame f = collision_frame(ell, w->theta1, w->theta2, w->psi);
        uv_err = (almost_physical(f, m, J) * w->V - w->V).norm_inf();
        gdotv = w->gamma_dot_v;
        SystemState s;
        s.x = w->d * unit_vector(w->psi);
        s.xbar = Vec2{0.0, 0.0};
        s.theta1 = w->theta1;
        s.theta2 = w->theta2;
        s.V = w->V;
        const SystemState probe = free_flight(s, 1e-5 * 2.0 * ell.support_max());
        flight = separation(ell, probe.x, probe.theta1, probe.xbar, probe.theta2);
    }
    const Particle disk = Particle::disk(1.0);
    const std::optional<UnphysicalWitness> dw =
        find_unphysical_witness(disk, disk.mass(), disk.inertia(), 100);

    Outcome o;
    o.pass = w.has_value() && uv_err <= 1e-10 && gdotv < -1e-6 && flight < 0.0 &&
             !dw.has_value();
    std::ostringstream os;
    os << "ellipse: approaching fixed point of the almost-physical family "
       << (w ? "found" : "missing") << " (|uV-V| " << fmt(uv_err) << " tol 1e-10, gamma.V "
       << fmt(gdotv) << " < -1e-6, flight separation " << fmt(flight)
       << " < 0); disk search over 100 draws: " << (dw ? "found one (unexpected)" : "none");
    o.detail = os.str();
    return o;
}

Outcome criterion_7_span_rank() {
    const double t0 = now_seconds();
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const double m = ell.mass(), J = ell.inertia();
    const int grid = 16, samples = 64;
    int generic_total = 0, generic_rank4 = 0, aligned_total = 0, aligned_rank3 = 0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double t1 = kTwoPi * i / grid, t2 = kTwoPi * j / grid;
            const int rank = span_rank(ell, t1, t2, m, J, samples);
            // orientations equal mod pi put both contact arms on the centre
            // line for every elevation; one direction collapses
            const bool aligned = (j - i) % 8 == 0;
            if (aligned) {
                ++aligned_total;
                aligned_rank3 += rank == 3 ? 1 : 0;
            } else {
                ++generic_total;
                generic_rank4 += rank == 4 ? 1 : 0;
            }
        }
    }
    const Particle disk = Particle::disk(1.0);
    Rng rng(1007);
    bool disk_ok = true;
    for (int k = 0; k < 4; ++k)
        disk_ok = disk_ok && span_rank(disk, rng.angle(), rng.angle(), disk.mass(),
                                       disk.inertia(), samples) == 2;
    const double elapsed = now_seconds() - t0;
    Outcome o;
    o.pass = generic_rank4 == generic_total && aligned_rank3 == aligned_total &&
             generic_total == 224 && aligned_total == 32 && disk_ok &&
             elapsed < 30.0;
    std::ostringstream os;
    os << "ellipse reflection directions: rank 4 at " << generic_rank4 << "/"
       << generic_total << " generic orientation pairs, rank 3 at " << aligned_rank3
       << "/" << aligned_total
       << " pairs with orientations equal mod pi (antipodal contact arms); disk rank 2 "
       << (disk_ok ? "confirmed" : "violated") << "; 16x16 grid, 64 elevations, "
       << fmt(elapsed) << " s (limit 30 s)";
    o.detail = os.str();
    return o;
}

Outcome criterion_8_orbit_density() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    EnergyMomentum ep;
    ep.e = 2.0;
    ep.p = Vec2{0.0, 0.0};
    const auto coverage_of = [&](const Particle& p, double t1, double t2, int wl,
                                 int count) {
        const std::vector<Vec6> pts =
            orbit_sample(p, t1, t2, ep, p.mass(), p.inertia(), 1, wl, count);
        std::vector<Vec4> ws;
        ws.reserve(pts.size());
        for (const Vec6& V : pts)
            ws.push_back(canonical_map(V, ep, p.mass(), p.inertia()));
        return orbit_coverage(ws, 4);
    };
    const double ell_cov = coverage_of(ell, 0.0, 1.0, 16, 100000);

    const Particle disk = Particle::disk(1.0);
    const double disk_cov_lo = coverage_of(disk, 0.0, 0.0, 12, 20000);
    const double disk_cov_hi = coverage_of(disk, 0.0, 0.0, 12, 40000);

    Outcome o;
    o.pass = ell_cov >= 0.99 && disk_cov_hi < 0.5 && disk_cov_lo == disk_cov_hi;
    std::ostringstream os;
    os << "ellipse orbit coverage " << fmt(ell_cov)
       << " of the 256 sphere bins with 100000 samples (need >= 0.99); disk coverage "
       << fmt(disk_cov_lo) << " at 20000 and " << fmt(disk_cov_hi)
       << " at 40000 samples: plateaued " << (disk_cov_lo == disk_cov_hi ? "yes" : "no")
       << ", strictly below 0.5";
    o.detail = os.str();
    return o;
}

Outcome criterion_9_conjugacy() {
    Rng rng(1009);
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const Particle disk = Particle::disk(1.0);
    double worst_ell = 0.0, worst_disk = 0.0;
    for (int k = 0; k < 1000; ++k) {
        for (const Particle* p : {&ell, &disk}) {
            const double m = p->mass(), J = p->inertia();
            const CollisionFrame f =
                collision_frame(*p, rng.angle(), rng.angle(), rng.angle());
            const Vec6 V = manifold_velocity(rng, m);
            const EnergyMomentum ep = energy_momentum(V, m, J);
            const Vec4 w_in = canonical_map(V, ep, m, J);
            const Vec4 w_out = canonical_map(physical_scattering(f, m, J) * V, ep, m, J);
            const Vec4 mu = mu_vector(f, m, J);
            const Vec4 image = w_in - (2.0 * w_in.dot(mu)) * mu;
            const double err = (image - w_out).norm_inf();
            if (p->is_disk())
                worst_disk = std::max(worst_disk, err);
            else
                worst_ell = std::max(worst_ell, err);
        }
    }
    double worst_mirror = 0.0;
    for (int k = 0; k < 200; ++k) {
        const Vec2 z1 = unit_vector(rng.angle()), z2 = unit_vector(rng.angle());
        const double mid = disk_reflection_witness(z1, z2);
        const Vec2 axis = unit_vector(mid).perp();
        const Vec2 image = z1 - 2.0 * z1.dot(axis) * axis;
        worst_mirror = std::max(worst_mirror, (image - z2).norm());
    }
    Outcome o;
    o.pass = worst_ell <= 1e-9 && worst_disk <= 1e-10 && worst_mirror <= 1e-12;
    o.detail = "sphere-reflection conjugacy err: ellipse " + fmt(worst_ell) +
               " (tol 1e-9), disk " + fmt(worst_disk) +
               " (tol 1e-10) on 1000 level-set samples each; disk mirror witness err " +
               fmt(worst_mirror) + " (tol 1e-12)";
    return o;
}

Outcome criterion_10_invariants() {
    const Particle ell = Particle::ellipse(2.0, 1.0);
    const Particle disk = Particle::disk(1.0);
    const InvariantBasis basis(2, 1);
    const NullspaceResult ens =
        invariant_nullspace(ell, ScatterFamily::physical, basis, 200, 1e-8, 7);
    double worst_dec = 0.0;
    for (const auto& vec : ens.null_vectors) {
        const InvariantDecomposition dec =
            decompose_invariant(basis, vec, ell.mass(), ell.inertia());
        worst_dec = std::max(worst_dec, dec.residual);
    }

    const NullspaceResult dns =
        invariant_nullspace(disk, ScatterFamily::physical, basis, 200, 1e-8, 8);
    // distance from the pure-spin coefficient vector to the recovered span
    std::vector<double> spin(static_cast<std::size_t>(basis.size()), 0.0);
    spin[static_cast<std::size_t>(basis.index_of(0, 0, 1, 0))] = 1.0;
    for (const auto& row : dns.null_vectors) {
        double proj = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) proj += row[i] * spin[i];
        for (std::size_t i = 0; i < row.size(); ++i) spin[i] -= proj * row[i];
    }
    double spin_dist = 0.0;
    for (double x : spin) spin_dist += x * x;
    spin_dist = std::sqrt(spin_dist);

    Outcome o;
    o.pass = ens.dimension == 6 && worst_dec <= 1e-6 && dns.dimension > 6 &&
             spin_dist <= 1e-8;
    std::ostringstream os;
    os << "ellipse invariant null space: dimension " << ens.dimension
       << " (expect 6), worst angular+momentum+energy decomposition residual "
       << fmt(worst_dec) << " (tol 1e-6); disk dimension " << dns.dimension
       << " (> 6) with pure spin inside the span (distance " << fmt(spin_dist) << ")";
    o.detail = os.str();
    return o;
}

}  // namespace

int main() {
    struct Entry {
        int index;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {1, criterion_1_conservation}, {2, criterion_2_involution},
        {3, criterion_3_disk_block},   {4, criterion_4_contact_oracle},
        {5, criterion_5_dynamics},     {6, criterion_6_witness},
        {7, criterion_7_span_rank},    {8, criterion_8_orbit_density},
        {9, criterion_9_conjugacy},    {10, criterion_10_invariants},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        std::printf("[%s] criterion %2d: %s\n", o.pass ? "PASS" : "FAIL", e.index,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
