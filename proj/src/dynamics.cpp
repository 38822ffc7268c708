// dynamics.cpp - conservative-advancement event detection and event loop.
#include "hardpair/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "hardpair/errors.hpp"

namespace hardpair {

namespace {

struct ReducedContact {
    double dist;   // |xbar - x|
    double psi_a;  // angle(xbar - x)
    ContactSolution sol;
    ContactDerivatives grad;
};

ReducedContact reduced_contact(const Particle& particle, const SystemState& s) {
    const Vec2 w = s.xbar - s.x;
    const double dist = w.norm();
    if (!(dist > 0.0)) throw ConfigError("separation undefined for coincident centres");
    ReducedContact rc;
    rc.dist = dist;
    rc.psi_a = std::atan2(w.y, w.x);
    const double theta = s.theta2 - s.theta1;
    rc.sol = closest_approach(particle, theta, rc.psi_a - s.theta1);
    rc.grad = closest_approach_gradient(particle, theta, rc.psi_a - s.theta1, rc.sol);
    return rc;
}

double rate_from(const ReducedContact& rc, const SystemState& s) {
    const Vec2 w = s.xbar - s.x;
    const Vec2 dw = s.vbar() - s.v();
    const double dist_rate = w.dot(dw) / rc.dist;
    const double psi_rate = w.perp().dot(dw) / (rc.dist * rc.dist);
    return dist_rate - rc.grad.dd_dtheta * (s.omegabar() - s.omega()) -
           rc.grad.dd_dpsi * (psi_rate - s.omega());
}

// Global bound on |d(separation)/dt| along a flight segment, valid while the
// bodies are disjoint (then |xbar - x| >= d >= 2 h_min).
double rate_bound(const Particle& particle, const SystemState& s,
                  const ContactBounds& b) {
    const double dv = (s.vbar() - s.v()).norm();
    const double hmin = particle.support_min();
    return dv * (1.0 + b.g_psi / (2.0 * hmin)) + b.g_psi * std::abs(s.omega()) +
           b.g_theta * (std::abs(s.omega()) + std::abs(s.omegabar()));
}

struct DetectorScales {
    double f_act;   // refine-mode activation on separation
    double dt_min;  // smallest probe step
    double dt_tol;  // bracketing width target
};

DetectorScales detector_scales(const Particle& particle, double horizon) {
    const double len = 2.0 * particle.support_max();
    const double ts = std::max(1.0, horizon);
    return {1e-9 * std::max(1.0, len), 1e-15 * ts, 1e-13 * ts};
}

double sep_at(const Particle& particle, const SystemState& s, double dt) {
    const SystemState probe = free_flight(s, dt);
    return separation(particle, probe.x, probe.theta1, probe.xbar, probe.theta2);
}

double rate_at(const Particle& particle, const SystemState& s, double dt) {
    return separation_rate(particle, free_flight(s, dt));
}

// F(lo) >= 0 >= F(hi): shrink to dt_tol and return the non-penetrating side.
double bisect_root(const Particle& particle, const SystemState& s, double lo,
                   double hi, double dt_tol) {
    for (int i = 0; i < 200 && hi - lo > dt_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (sep_at(particle, s, mid) >= 0.0) lo = mid; else hi = mid;
    }
    return lo;
}

// Locate the separation minimum inside (lo, hi) given rate(lo) < 0 < rate(hi).
double bisect_rate_zero(const Particle& particle, const SystemState& s, double lo,
                        double hi, double dt_tol) {
    for (int i = 0; i < 200 && hi - lo > dt_tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rate_at(particle, s, mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ConservedQuantities conserved_quantities(const SystemState& s, double m, double J) {
    ConservedQuantities q;
    q.P = m * (s.v() + s.vbar());
    q.E = m * s.v().norm2() + m * s.vbar().norm2() +
          J * (s.omega() * s.omega() + s.omegabar() * s.omegabar());
    q.A = m * (s.x.perp().dot(s.v()) + s.xbar.perp().dot(s.vbar())) +
          J * (s.omega() + s.omegabar());
    return q;
}

SystemState free_flight(SystemState s, double dt) {
    s.x = s.x + dt * s.v();
    s.xbar = s.xbar + dt * s.vbar();
    s.theta1 = wrap_angle(s.theta1 + dt * s.omega());
    s.theta2 = wrap_angle(s.theta2 + dt * s.omegabar());
    s.t += dt;
    return s;
}

double separation_rate(const Particle&, const SystemState& s,
                       const ContactDerivatives& grad) {
    const Vec2 w = s.xbar - s.x;
    const double dist = w.norm();
    const Vec2 dw = s.vbar() - s.v();
    const double psi_rate = w.perp().dot(dw) / (dist * dist);
    return w.dot(dw) / dist - grad.dd_dtheta * (s.omegabar() - s.omega()) -
           grad.dd_dpsi * (psi_rate - s.omega());
}

double separation_rate(const Particle& particle, const SystemState& s) {
    return rate_from(reduced_contact(particle, s), s);
}

std::optional<double> next_collision_time(const Particle& particle,
                                          const SystemState& s, double horizon,
                                          const ContactBounds& bounds) {
    if (!(horizon > 0.0)) return std::nullopt;
    const DetectorScales sc = detector_scales(particle, horizon);
    const double L = rate_bound(particle, s, bounds);
    if (L < 1e-300) return std::nullopt;  // relative rest: separation frozen

    double t = 0.0;
    double F = sep_at(particle, s, 0.0);
    if (!(F > 0.0)) throw ConfigError("next_collision_time requires positive separation");

    long outer_guard = 0;
    while (true) {
        if (++outer_guard > 2000000)
            throw NumericalError("collision detection stalled (conservative phase)");

        if (F > sc.f_act) {
            // conservative advancement: no root can occur within 0.9 F / L
            const double step = 0.9 * F / L;
            if (t + step >= horizon) return std::nullopt;
            t += step;
            F = sep_at(particle, s, t);
            if (F <= 0.0)  // defensive: bound violation would be a logic error
                return bisect_root(particle, s, t - step, t, sc.dt_tol);
            continue;
        }

        // refine mode: exact-rate Newton with valley handling
        double last_dt = sc.dt_min;
        long refine_guard = 0;
        bool resumed = false;
        while (true) {
            if (++refine_guard > 200000)
                throw NumericalError("collision detection stalled (refine phase)");
            if (t >= horizon) return std::nullopt;
            const double rate = rate_at(particle, s, t);
            if (rate < 0.0) {
                const double dt =
                    std::min(std::max(F / (-rate), sc.dt_min), horizon - t);
                const double tn = t + dt;
                const double Fn = sep_at(particle, s, tn);
                if (Fn <= 0.0) return bisect_root(particle, s, t, tn, sc.dt_tol);
                if (rate_at(particle, s, tn) >= 0.0) {
                    // minimum inside (t, tn): inspect it before moving on
                    const double tm = bisect_rate_zero(particle, s, t, tn, sc.dt_tol);
                    const double Fm = sep_at(particle, s, tm);
                    if (Fm <= 0.0) return bisect_root(particle, s, t, tm, sc.dt_tol);
                    t = tm;
                    F = Fm;  // near miss: crawl out from the valley bottom
                } else {
                    t = tn;
                    F = Fn;
                }
                last_dt = dt;
            } else {
                if (F > 4.0 * sc.f_act) { resumed = true; break; }  // back to CA
                const double dt = std::min(std::max(2.0 * last_dt, sc.dt_min),
                                           std::max(horizon - t, sc.dt_min));
                const double tn = t + dt;
                const double Fn = sep_at(particle, s, tn);
                if (Fn <= 0.0) return bisect_root(particle, s, t, tn, sc.dt_tol);
                t = tn;
                F = Fn;
                last_dt = dt;
            }
        }
        if (resumed) continue;
    }
}

std::optional<double> next_collision_time(const Particle& particle,
                                          const SystemState& s, double horizon) {
    return next_collision_time(particle, s, horizon,
                               contact_derivative_bounds(particle));
}

SystemState resolve_collision(const Particle& particle, const SystemState& s,
                              ScatterFamily family, Event* event_out) {
    const double len = std::max(1.0, 2.0 * particle.support_max());
    const double F = separation(particle, s.x, s.theta1, s.xbar, s.theta2);
    if (F > 1e-10 * len) {
        std::ostringstream os;
        os << "resolve_collision requires contact, separation=" << F;
        throw ConfigError(os.str());
    }
    const Vec2 w = s.x - s.xbar;
    const double psi_event = std::atan2(w.y, w.x);
    const CollisionFrame frame =
        collision_frame(particle, s.theta1, s.theta2, psi_event);
    const double m = particle.mass(), J = particle.inertia();
    const CollisionNormal cn = collision_normal(frame, m, J);
    const Classification cls = classify(s.V, cn);
    if (cls == Classification::post_collisional)
        throw ConfigError("resolve_collision requires an approaching or tangential state");

    const Mat6 S = family == ScatterFamily::physical
                       ? physical_scattering(frame, m, J)
                       : almost_physical(frame, m, J);
    SystemState out = s;
    out.V = S * s.V;
    if (event_out) {
        event_out->time = s.t;
        event_out->theta1 = frame.theta1;
        event_out->theta2 = frame.theta2;
        event_out->psi = frame.psi;
        event_out->d = frame.d;
        event_out->v_pre = s.V;
        event_out->v_post = out.V;
        event_out->family = family;
        event_out->pre_class = cls;
    }
    return out;
}

namespace {

// Advance by dt, recording samples at the requested cadence along the way.
void flight_recording(SystemState& state, double dt,
                      double m, double J, double sample_dt, double& next_sample,
                      Trajectory& traj) {
    const double t_target = state.t + dt;
    if (sample_dt > 0.0) {
        while (next_sample <= t_target + 1e-15) {
            state = free_flight(state, next_sample - state.t);
            traj.samples.push_back(
                {state.t, state, conserved_quantities(state, m, J)});
            next_sample += sample_dt;
        }
    }
    state = free_flight(state, t_target - state.t);
}

}  // namespace

Trajectory simulate(const Particle& particle, const SystemState& initial, double T,
                    ScatterFamily family, const SimulateOptions& opts) {
    const ContactBounds bounds =
        opts.bounds ? *opts.bounds : contact_derivative_bounds(particle);
    const double m = particle.mass(), J = particle.inertia();
    const double t_end = initial.t + T;
    const DetectorScales sc = detector_scales(particle, std::max(T, 1.0));
    const double len = std::max(1.0, 2.0 * particle.support_max());
    const double pen_tol = 1e-9 * len;

    Trajectory traj;
    traj.initial = initial;
    SystemState state = initial;

    const double F0 = separation(particle, state.x, state.theta1, state.xbar,
                                 state.theta2);
    if (F0 < -1e-8 * len) throw ConfigError("initial state is penetrating");

    traj.samples.push_back({state.t, state, conserved_quantities(state, m, J)});
    double next_sample = opts.sample_dt > 0.0 ? state.t + opts.sample_dt : t_end + 1.0;

    long guard = 0;
    while (state.t < t_end - 1e-15) {
        if (++guard > 4 * opts.max_events + 1000)
            throw NumericalError("event loop failed to advance");

        double F = separation(particle, state.x, state.theta1, state.xbar,
                              state.theta2);
        if (F <= sc.f_act) {
            // at (or numerically at) contact: resolve if approaching, then
            // bootstrap away from the boundary before detecting again
            const Vec2 wc = state.x - state.xbar;
            const CollisionFrame frame = collision_frame(
                particle, state.theta1, state.theta2, std::atan2(wc.y, wc.x));
            const CollisionNormal cn = collision_normal(frame, m, J);
            if (classify(state.V, cn) == Classification::post_collisional) {
                ++traj.grazing_skips;
            } else {
                if (static_cast<long>(traj.events.size()) >= opts.max_events)
                    throw NumericalError("maximum event count exceeded");
                Event ev;
                state = resolve_collision(particle, state, family, &ev);
                traj.events.push_back(ev);
            }
            // bootstrap: doubling probe away from the contact
            double dt = sc.dt_min;
            bool escaped = false;
            while (state.t + dt <= t_end) {
                const double Fp = sep_at(particle, state, dt);
                if (Fp < -pen_tol) {
                    // interpenetration: expected for almost-physical fixed
                    // points; fatal diagnosis either way
                    flight_recording(state, dt, m, J, opts.sample_dt,
                                     next_sample, traj);
                    traj.penetration_detected = true;
                    traj.penetration_depth = Fp;
                    traj.samples.push_back(
                        {state.t, state, conserved_quantities(state, m, J)});
                    traj.final_state = state;
                    return traj;
                }
                if (Fp > 2.0 * sc.f_act) {
                    flight_recording(state, dt, m, J, opts.sample_dt,
                                     next_sample, traj);
                    escaped = true;
                    break;
                }
                dt *= 2.0;
            }
            if (!escaped) {
                // contact persists to the end of the horizon (e.g. tangential
                // relative rest); finish with plain flight
                flight_recording(state, t_end - state.t, m, J,
                                 opts.sample_dt, next_sample, traj);
                break;
            }
            continue;
        }

        const double horizon = t_end - state.t;
        const std::optional<double> hit =
            next_collision_time(particle, state, horizon, bounds);
        if (!hit) {
            flight_recording(state, horizon, m, J, opts.sample_dt,
                             next_sample, traj);
            break;
        }
        flight_recording(state, *hit, m, J, opts.sample_dt, next_sample,
                         traj);
        // loop re-enters the contact branch with F at the bracketing tolerance
    }

    traj.samples.push_back({state.t, state, conserved_quantities(state, m, J)});
    traj.final_state = state;
    return traj;
}

double min_separation_scan(const Particle& particle, const Trajectory& traj,
                           double scan_dt) {
    double best = 1e300;
    SystemState state = traj.initial;
    std::size_t next_event = 0;
    const double t_end = traj.final_state.t;
    while (true) {
        const double seg_end = next_event < traj.events.size()
                                   ? traj.events[next_event].time
                                   : t_end;
        double t = state.t;
        while (t < seg_end) {
            const SystemState probe = free_flight(state, t - state.t);
            best = std::min(best, separation(particle, probe.x, probe.theta1,
                                             probe.xbar, probe.theta2));
            t += scan_dt;
        }
        state = free_flight(state, seg_end - state.t);
        best = std::min(best, separation(particle, state.x, state.theta1,
                                         state.xbar, state.theta2));
        if (next_event < traj.events.size()) {
            state.V = traj.events[next_event].v_post;
            ++next_event;
        } else {
            break;
        }
    }
    return best;
}

}  // namespace hardpair
