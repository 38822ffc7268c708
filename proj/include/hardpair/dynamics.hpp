// Event-driven dynamics for a pair of identical convex particles: free flight,
// collision-time detection on the separation function, and impulse resolution.
#pragma once

#include <optional>
#include <vector>

#include "hardpair/contact.hpp"
#include "hardpair/scatter.hpp"
#include "hardpair/vec.hpp"

namespace hardpair {

struct SystemState {
    Vec2 x{}, xbar{};               // centres of mass
    double theta1 = 0.0, theta2 = 0.0;  // orientations, stored mod 2pi
    Vec6 V{};                       // [v, vbar, omega, omegabar]
    double t = 0.0;

    Vec2 v() const { return {V[0], V[1]}; }
    Vec2 vbar() const { return {V[2], V[3]}; }
    double omega() const { return V[4]; }
    double omegabar() const { return V[5]; }
};

struct ConservedQuantities {
    Vec2 P{};       // total linear momentum m(v + vbar)
    double E = 0.0; // m|v|^2 + J w^2 + m|vbar|^2 + J wbar^2  (= |MV|^2)
    double A = 0.0; // angular momentum about the origin
};

struct Event {
    double time = 0.0;
    double theta1 = 0.0, theta2 = 0.0, psi = 0.0;  // contact configuration
    double d = 0.0;                                // centre distance at contact
    Vec6 v_pre{}, v_post{};
    ScatterFamily family = ScatterFamily::physical;
    Classification pre_class = Classification::pre_collisional;
};

struct TrajectorySample {
    double t = 0.0;
    SystemState state;
    ConservedQuantities q;
};

struct Trajectory {
    SystemState initial;
    SystemState final_state;
    std::vector<Event> events;
    std::vector<TrajectorySample> samples;
    bool penetration_detected = false;  // expected for almost-physical fixed points
    double penetration_depth = 0.0;     // most negative separation when flagged
    long grazing_skips = 0;             // receding near-contacts passed without impulse
};

struct SimulateOptions {
    double sample_dt = 0.0;  // <= 0: record initial and final states only
    long max_events = 1000000;
    const ContactBounds* bounds = nullptr;  // reuse precomputed derivative bounds
};

ConservedQuantities conserved_quantities(const SystemState& s, double m, double J);

// Positions and orientations advance linearly; velocities are untouched.
SystemState free_flight(SystemState s, double dt);

// Exact time derivative of separation(s) along free flight.
double separation_rate(const Particle& particle, const SystemState& s,
                       const ContactDerivatives& grad);
double separation_rate(const Particle& particle, const SystemState& s);

// Earliest t* in (0, horizon] with separation = 0, or nullopt. Conservative
// advancement: steps bounded by separation / (global approach-rate bound),
// then an exact-rate Newton refinement with bracketing bisection. Requires a
// strictly positive initial separation.
std::optional<double> next_collision_time(const Particle& particle,
                                          const SystemState& s, double horizon,
                                          const ContactBounds& bounds);
std::optional<double> next_collision_time(const Particle& particle,
                                          const SystemState& s, double horizon);

// Applies the chosen impulse family at a contact state (separation within
// tolerance of zero) and reports the event. The state must be approaching or
// tangential; positive separation is a contract violation. The frame is
// assembled at elevation angle(x - xbar); see the family notes in scatter.hpp
// for what each family does at that elevation (the physical family conserves
// energy, linear momentum, and angular momentum there; the almost-physical
// family generically transfers angular momentum and may fail to separate).
SystemState resolve_collision(const Particle& particle, const SystemState& s,
                              ScatterFamily family, Event* event_out = nullptr);

// Alternates flight and resolution until time s.t + T. Records conserved
// quantities at sample_dt cadence. With the almost-physical family the motion
// can reach a penetrating configuration; that is flagged and the run stops.
Trajectory simulate(const Particle& particle, const SystemState& initial, double T,
                    ScatterFamily family, const SimulateOptions& opts = {});

// Post-hoc audit: minimum separation over a dense time grid of the trajectory.
double min_separation_scan(const Particle& particle, const Trajectory& traj,
                           double scan_dt);

}  // namespace hardpair
