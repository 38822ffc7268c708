// cli.cpp - subcommand plumbing around the library modules.
#include "hardpair/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hardpair/contact.hpp"
#include "hardpair/dynamics.hpp"
#include "hardpair/errors.hpp"
#include "hardpair/invariants.hpp"
#include "hardpair/report.hpp"
#include "hardpair/rng.hpp"
#include "hardpair/scatter.hpp"

namespace hardpair {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + text + "' for " + context);
    }
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& context) {
    std::vector<double> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::istringstream parts(token);
        std::string piece;
        while (parts >> piece) out.push_back(parse_number(piece, context));
    }
    if (out.empty()) throw ConfigError("empty number list for " + context);
    return out;
}

// Output destination: file when a path is given, stdout otherwise.
struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw ConfigError("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& out() { return *os; }
};

ScatterFamily family_from(const std::string& name) {
    if (name == "physical") return ScatterFamily::physical;
    if (name == "almost_physical" || name == "almost") return ScatterFamily::almost_physical;
    throw ConfigError("unknown scattering family: " + name);
}

const char* family_name(ScatterFamily f) {
    return f == ScatterFamily::physical ? "physical" : "almost_physical";
}

Vec6 vec6_from(const std::vector<double>& v) {
    return Vec6{v[0], v[1], v[2], v[3], v[4], v[5]};
}

double max_abs_diff(const Mat6& a, const Mat6& b) {
    double best = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            best = std::max(best, std::abs(a(i, j) - b(i, j)));
    return best;
}

// ---------------------------------------------------------------- contact --

struct ContactArgs {
    std::string particle_path, format = "jsonl", out_path;
    std::vector<double> beta;
    double tol = 1e-6;
    bool check = false;
};

int cmd_contact(const ContactArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const double m = particle.mass(), J = particle.inertia();
    const CollisionFrame f = collision_frame(particle, a.beta[0], a.beta[1], a.beta[2]);
    const CollisionNormal cn = collision_normal(f, m, J);

    const double unit_err = std::abs(cn.gamma_hat.norm() - 1.0);
    // dual-route derivative audit: the normal identity d e(psi)^perp . Ntilde
    // = -dd/dpsi, with the right side re-measured by central differences
    const double h = 1e-5;
    const double d_plus =
        closest_approach(particle, a.beta[1] - a.beta[0], a.beta[2] - a.beta[0] + h).d;
    const double d_minus =
        closest_approach(particle, a.beta[1] - a.beta[0], a.beta[2] - a.beta[0] - h).d;
    const double fd_dpsi = (d_plus - d_minus) / (2.0 * h);
    const Vec2 ntilde = unit_vector(f.psi) - (f.dd_dpsi / f.d) * unit_vector(f.psi).perp();
    const double identity_err =
        std::abs(f.d * unit_vector(f.psi).perp().dot(ntilde) + fd_dpsi);

    json j = json_of(f);
    j["schema"] = kSchemaContact;
    j["particle"] = json_of(particle);
    j["beta"] = json::array({a.beta[0], a.beta[1], a.beta[2]});
    j["Lambda"] = cn.Lambda;
    j["gamma"] = json_of(cn.gamma);
    j["gamma_hat"] = json_of(cn.gamma_hat);
    j["checks"] =
        json{{"gamma_hat_unit_error", unit_err}, {"normal_identity_error", identity_err}};

    Sink sink(a.out_path);
    if (a.format == "csv") {
        sink.out() << "theta1,theta2,psi,d,p_x,p_y,q_x,q_y,n_x,n_y,N_x,N_y,r_x,r_y,"
                      "dd_dpsi,dd_dtheta,Lambda\n";
        sink.out() << csv_row({f.theta1, f.theta2, f.psi, f.d, f.p.x, f.p.y, f.q.x,
                               f.q.y, f.n.x, f.n.y, f.N.x, f.N.y, f.r.x, f.r.y,
                               f.dd_dpsi, f.dd_dtheta, cn.Lambda})
                   << "\n";
    } else {
        sink.out() << j.dump() << "\n";
    }
    if (a.check && (unit_err > 1e-12 || identity_err > a.tol)) return 4;
    return 0;
}

// ---------------------------------------------------------------- scatter --

struct ScatterArgs {
    std::string particle_path, format = "jsonl", out_path, family = "physical";
    std::vector<double> beta, velocity;
    double tol = 1e-10;
    bool check = false;
};

int cmd_scatter(const ScatterArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const double m = particle.mass(), J = particle.inertia();
    const ScatterFamily fam = family_from(a.family);
    const CollisionFrame f = collision_frame(particle, a.beta[0], a.beta[1], a.beta[2]);
    const CollisionNormal cn = collision_normal(f, m, J);
    const Mat6 S = fam == ScatterFamily::physical ? physical_scattering(f, m, J)
                                                  : almost_physical(f, m, J);

    const Mat6 M = mass_matrix(m, J), Mi = mass_matrix_inverse(m, J);
    const Mat6 R = M * S * Mi;
    const double involution_err = max_abs_diff(S * S, Mat6::identity());
    const double orthogonality_err = max_abs_diff(R.transposed() * R, Mat6::identity());

    bool disk_block = false;
    double disk_block_err = -1.0;
    if (particle.is_disk()) {
        const Mat4 B = disk_scattering(f.psi);
        Mat6 expected = Mat6::identity();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) expected(i, j) = B(i, j);
        disk_block_err = max_abs_diff(S, expected);
        disk_block = disk_block_err <= 1e-10;
    }

    json j{{"schema", kSchemaScatter},
           {"particle", json_of(particle)},
           {"beta", json::array({a.beta[0], a.beta[1], a.beta[2]})},
           {"family", family_name(fam)},
           {"matrix", json_of(S)},
           {"Lambda", cn.Lambda},
           {"gamma_hat", json_of(cn.gamma_hat)},
           {"involution_error", involution_err},
           {"orthogonality_error", orthogonality_err},
           {"disk_block_form", disk_block}};
    if (disk_block_err >= 0.0) j["disk_block_error"] = disk_block_err;

    double momentum_err = -1.0, energy_rel_err = -1.0;
    if (!a.velocity.empty()) {
        const Vec6 V = vec6_from(a.velocity);
        const Vec6 Vp = S * V;
        momentum_err = std::max(std::abs((Vp[0] + Vp[2]) - (V[0] + V[2])),
                                std::abs((Vp[1] + Vp[3]) - (V[1] + V[3]))) * m;
        const auto energy = [&](const Vec6& u) {
            return m * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) +
                   J * (u[4] * u[4] + u[5] * u[5]);
        };
        const double e0 = energy(V), e1 = energy(Vp);
        energy_rel_err = std::abs(e1 - e0) / std::max(e0, 1e-300);
        j["applied"] = json{{"v_pre", json_of(V)},
                            {"v_post", json_of(Vp)},
                            {"momentum_error", momentum_err},
                            {"energy_relative_error", energy_rel_err}};
    }

    Sink sink(a.out_path);
    if (a.format == "csv") {
        std::vector<double> flat;
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < 6; ++k) flat.push_back(S(i, k));
        sink.out() << "m11,m12,m13,m14,m15,m16,m21,m22,m23,m24,m25,m26,m31,m32,m33,"
                      "m34,m35,m36,m41,m42,m43,m44,m45,m46,m51,m52,m53,m54,m55,m56,"
                      "m61,m62,m63,m64,m65,m66\n"
                   << csv_row(flat) << "\n";
    } else {
        sink.out() << j.dump() << "\n";
    }

    if (a.check) {
        if (involution_err > a.tol || orthogonality_err > a.tol) return 4;
        if (particle.is_disk() && fam == ScatterFamily::physical && !disk_block) return 4;
        if (momentum_err > a.tol) return 4;
        if (energy_rel_err > std::max(a.tol, 1e-9)) return 4;
    }
    return 0;
}

// --------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string particle_path, format = "jsonl", out_path, events_path;
    std::string family = "physical";
    std::vector<double> state, velocity;
    double time = 1.0, sample_dt = -1.0, scan_dt = 1e-3;
    bool check = false;
};

int cmd_simulate(const SimulateArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const double m = particle.mass(), J = particle.inertia();
    const ScatterFamily fam = family_from(a.family);
    if (!(a.time > 0.0)) throw ConfigError("--time must be positive");

    SystemState s0;
    s0.x = Vec2{a.state[0], a.state[1]};
    s0.theta1 = a.state[2];
    s0.xbar = Vec2{a.state[3], a.state[4]};
    s0.theta2 = a.state[5];
    s0.V = vec6_from(a.velocity);

    SimulateOptions opts;
    opts.sample_dt = a.sample_dt > 0.0 ? a.sample_dt : a.time / 100.0;
    const Trajectory traj = simulate(particle, s0, a.time, fam, opts);

    // record stream
    {
        Sink sink(a.out_path);
        if (a.format == "csv") {
            sink.out() << "t,x1,x2,theta1,xbar1,xbar2,theta2,v1,v2,vbar1,vbar2,"
                          "omega,omegabar,P1,P2,E,A\n";
            for (const TrajectorySample& smp : traj.samples) {
                const SystemState& s = smp.state;
                sink.out() << csv_row({smp.t, s.x.x, s.x.y, s.theta1, s.xbar.x,
                                       s.xbar.y, s.theta2, s.V[0], s.V[1], s.V[2],
                                       s.V[3], s.V[4], s.V[5], smp.q.P.x, smp.q.P.y,
                                       smp.q.E, smp.q.A})
                           << "\n";
            }
        } else {
            for (const TrajectorySample& smp : traj.samples)
                sink.out() << sample_record(smp).dump() << "\n";
        }
    }
    if (!a.events_path.empty()) {
        Sink sink(a.events_path);
        if (a.format == "csv") {
            sink.out() << "time,theta1,theta2,psi,d,vpre1,vpre2,vpre3,vpre4,vpre5,"
                          "vpre6,vpost1,vpost2,vpost3,vpost4,vpost5,vpost6\n";
            for (const Event& e : traj.events) {
                sink.out() << csv_row({e.time, e.theta1, e.theta2, e.psi, e.d,
                                       e.v_pre[0], e.v_pre[1], e.v_pre[2], e.v_pre[3],
                                       e.v_pre[4], e.v_pre[5], e.v_post[0],
                                       e.v_post[1], e.v_post[2], e.v_post[3],
                                       e.v_post[4], e.v_post[5]})
                           << "\n";
            }
        } else {
            for (const Event& e : traj.events) sink.out() << json_of(e).dump() << "\n";
        }
    }

    // conservation drift relative to natural scales of the initial state
    const ConservedQuantities q0 = conserved_quantities(s0, m, J);
    double drift_e = 0.0, drift_p = 0.0;
    for (const TrajectorySample& smp : traj.samples) {
        drift_e = std::max(drift_e, std::abs(smp.q.E - q0.E));
        drift_p = std::max(drift_p, std::max(std::abs(smp.q.P.x - q0.P.x),
                                             std::abs(smp.q.P.y - q0.P.y)));
    }
    const double e_scale = std::max(q0.E, 1e-300);
    const double p_scale = std::max(std::sqrt(m * q0.E), 1e-300);
    const double min_sep = min_separation_scan(particle, traj, a.scan_dt);

    json summary{{"schema", kSchemaSimSummary},
                 {"family", family_name(fam)},
                 {"events", traj.events.size()},
                 {"samples", traj.samples.size()},
                 {"energy_drift_rel", drift_e / e_scale},
                 {"momentum_drift_rel", drift_p / p_scale},
                 {"min_separation", min_sep},
                 {"penetration_detected", traj.penetration_detected},
                 {"penetration_depth", traj.penetration_depth},
                 {"grazing_skips", traj.grazing_skips},
                 {"final", json_of(traj.final_state)}};
    std::cout << summary.dump() << "\n";

    if (a.check) {
        if (drift_e / e_scale > 1e-9 || drift_p / p_scale > 1e-9) return 4;
        if (min_sep < -1e-8) return 4;
        if (fam == ScatterFamily::physical && traj.penetration_detected) return 4;
    }
    return 0;
}

// ------------------------------------------------------------------ orbit --

struct OrbitArgs {
    std::string particle_path, format = "jsonl", out_path;
    // default orientations in general position: at theta2 - theta1 = 0 or pi
    // the two contact arms are antipodal for every psi and the reflection
    // family is trapped in a hyperplane (see docs/cli.md)
    std::vector<double> pair{0.0, 1.0}, momentum{0.0, 0.0};
    double energy = 2.0;
    std::uint64_t seed = 1;
    int samples = 10000, word_length = 16, resolution = 4;
    bool check = false;
};

int cmd_orbit(const OrbitArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const double m = particle.mass(), J = particle.inertia();
    if (a.samples < 1) throw ConfigError("--samples must be positive");
    if (a.word_length < 0) throw ConfigError("--word-length must be nonnegative");
    EnergyMomentum ep;
    ep.e = a.energy;
    ep.p = Vec2{a.momentum[0], a.momentum[1]};

    const std::vector<Vec6> points = orbit_sample(particle, a.pair[0], a.pair[1], ep,
                                                  m, J, a.seed, a.word_length,
                                                  a.samples);
    double manifold_err = 0.0;
    std::vector<Vec4> ws;
    ws.reserve(points.size());
    for (const Vec6& V : points) {
        const EnergyMomentum got = energy_momentum(V, m, J);
        manifold_err = std::max(manifold_err,
                                std::abs(got.e * got.e - ep.e * ep.e) /
                                    std::max(ep.e * ep.e, 1e-300));
        manifold_err = std::max(manifold_err, std::abs(got.p.x - ep.p.x));
        manifold_err = std::max(manifold_err, std::abs(got.p.y - ep.p.y));
        ws.push_back(canonical_map(V, ep, m, J));
    }
    const std::vector<long> counts = orbit_bin_counts(ws, a.resolution);
    long hit = 0;
    for (long c : counts) hit += c > 0 ? 1 : 0;
    const double coverage = static_cast<double>(hit) / counts.size();

    if (a.format == "csv") {
        Sink sink(a.out_path);
        const int res = a.resolution, phi_bins = res * res;
        sink.out() << "i1,i2,i3,count\n";
        for (std::size_t idx = 0; idx < counts.size(); ++idx) {
            const int i3 = static_cast<int>(idx) % phi_bins;
            const int i2 = (static_cast<int>(idx) / phi_bins) % res;
            const int i1 = static_cast<int>(idx) / (phi_bins * res);
            sink.out() << i1 << "," << i2 << "," << i3 << "," << counts[idx] << "\n";
        }
    }

    json summary{{"schema", kSchemaOrbit},
                 {"particle", json_of(particle)},
                 {"pair", json::array({a.pair[0], a.pair[1]})},
                 {"energy", a.energy},
                 {"momentum", json::array({a.momentum[0], a.momentum[1]})},
                 {"seed", a.seed},
                 {"samples", a.samples},
                 {"word_length", a.word_length},
                 {"resolution", a.resolution},
                 {"bins_total", counts.size()},
                 {"bins_hit", hit},
                 {"coverage", coverage},
                 {"max_manifold_error", manifold_err}};
    if (a.format != "csv") {
        Sink sink(a.out_path);
        sink.out() << summary.dump() << "\n";
    } else {
        std::cout << summary.dump() << "\n";
    }
    if (a.check && manifold_err > 1e-9) return 4;
    return 0;
}

// ------------------------------------------------------------- invariants --

struct InvariantsArgs {
    std::string particle_path, format = "jsonl", out_path, family = "physical";
    int degree = 2, modes = 1, samples = 0;
    double tol = 1e-8;
    std::uint64_t seed = 1;
    bool check = false;
};

int cmd_invariants(const InvariantsArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const ScatterFamily fam = family_from(a.family);
    const InvariantBasis basis(a.degree, a.modes);
    const int n = a.samples > 0 ? a.samples : 40 * basis.size();
    const NullspaceResult ns =
        invariant_nullspace(particle, fam, basis, n, a.tol, a.seed);

    // independent audit of each null vector on fresh samples
    const double m = particle.mass(), J = particle.inertia();
    Rng rng(a.seed + 1);
    const double vs = 1.0 / std::sqrt(m), wsc = 1.0 / std::sqrt(J);
    std::vector<double> fresh_max(ns.null_vectors.size(), 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        Vec6 V;
        for (int c = 0; c < 4; ++c) V[c] = vs * rng.normal();
        V[4] = wsc * rng.normal();
        V[5] = wsc * rng.normal();
        const double t1 = rng.angle(), t2 = rng.angle(), ps = rng.angle();
        for (std::size_t k = 0; k < ns.null_vectors.size(); ++k) {
            const double r = invariant_residual(particle, basis, ns.null_vectors[k],
                                                V, t1, t2, ps, fam);
            fresh_max[k] = std::max(fresh_max[k], std::abs(r));
        }
    }

    json jvecs = json::array(), jdecs = json::array(), jlabels = json::array();
    for (int i = 0; i < basis.size(); ++i) jlabels.push_back(basis.label(i));
    for (const auto& vec : ns.null_vectors) {
        jvecs.push_back(vec);
        const InvariantDecomposition dec = decompose_invariant(basis, vec, m, J);
        jdecs.push_back(json{{"a", dec.a},
                             {"b", json_of(dec.b)},
                             {"c", dec.c},
                             {"residual", dec.residual}});
    }
    json j{{"schema", kSchemaInvariants},
           {"particle", json_of(particle)},
           {"family", family_name(fam)},
           {"degree", a.degree},
           {"fourier_modes", a.modes},
           {"samples", n},
           {"seed", a.seed},
           {"tol", a.tol},
           {"basis_size", basis.size()},
           {"basis_labels", jlabels},
           {"dimension", ns.dimension},
           {"singular_values", ns.singular_values},
           {"null_vectors", jvecs},
           {"decompositions", jdecs},
           {"fresh_residual_max", fresh_max}};

    Sink sink(a.out_path);
    if (a.format == "csv") {
        sink.out() << "index,singular_value\n";
        for (std::size_t i = 0; i < ns.singular_values.size(); ++i)
            sink.out() << i << "," << format_full(ns.singular_values[i]) << "\n";
        std::cout << j.dump() << "\n";
    } else {
        sink.out() << j.dump() << "\n";
    }

    if (a.check) {
        for (double r : fresh_max)
            if (r > 1e-6) return 4;
    }
    return 0;
}

// ---------------------------------------------------------------- witness --

struct WitnessArgs {
    std::string particle_path, format = "jsonl", out_path;
    int budget = 1000;
    bool check = false;
};

int cmd_witness(const WitnessArgs& a) {
    const Particle particle = load_particle_file(a.particle_path);
    const double m = particle.mass(), J = particle.inertia();
    if (a.budget < 1) throw ConfigError("--budget must be positive");
    const std::optional<UnphysicalWitness> w =
        find_unphysical_witness(particle, m, J, a.budget);

    json j{{"schema", kSchemaWitness},
           {"particle", json_of(particle)},
           {"budget", a.budget},
           {"found", w.has_value()}};
    double uv_err = -1.0, flight_sep = 0.0, flight_dt = 0.0;
    if (w) {
        const CollisionFrame f =
            collision_frame(particle, w->theta1, w->theta2, w->psi);
        const Mat6 u = almost_physical(f, m, J);
        const Vec6 diff = u * w->V - w->V;
        uv_err = diff.norm_inf();
        // continue by free flight from the contact configuration
        // (x - xbar = d e(psi)); penetration means negative separation
        SystemState s;
        s.x = w->d * unit_vector(w->psi);
        s.xbar = Vec2{0.0, 0.0};
        s.theta1 = w->theta1;
        s.theta2 = w->theta2;
        s.V = w->V;
        flight_dt = 1e-5 * std::max(1.0, 2.0 * particle.support_max());
        const SystemState probe = free_flight(s, flight_dt);
        flight_sep =
            separation(particle, probe.x, probe.theta1, probe.xbar, probe.theta2);
        j["beta"] = json::array({w->theta1, w->theta2, w->psi});
        j["V"] = json_of(w->V);
        j["gamma_dot_v"] = w->gamma_dot_v;
        j["d"] = w->d;
        j["fixed_point_error"] = uv_err;
        j["flight_dt"] = flight_dt;
        j["flight_separation"] = flight_sep;
    }

    Sink sink(a.out_path);
    sink.out() << j.dump() << "\n";

    if (a.check && w) {
        if (uv_err > 1e-10) return 4;
        if (w->gamma_dot_v >= -1e-6) return 4;
        if (flight_sep >= 0.0) return 4;
    }
    return 0;
}

void add_common(CLI::App* sub, std::string& particle, std::string& format,
                std::string& out, bool& check) {
    sub->add_option("--particle", particle, "particle description file")
        ->required();
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    sub->add_option("--out", out, "write primary output to this file");
    sub->add_flag("--check", check, "verify contract properties; exit 4 on failure");
}

}  // namespace

Particle load_particle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open particle file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("particle file line is not 'key = value': " + line);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError("duplicate particle key: " + key);
        kv[key] = value;
    }
    if (!kv.count("kind")) throw ConfigError("particle file is missing 'kind'");
    const std::string kind = lower(kv.at("kind"));
    const double density =
        kv.count("density") ? parse_number(kv.at("density"), "density") : 1.0;

    std::vector<std::string> allowed{"kind", "density"};
    Particle particle = [&]() {
        if (kind == "disk") {
            allowed.push_back("radius");
            if (!kv.count("radius")) throw ConfigError("disk requires 'radius'");
            return Particle::disk(parse_number(kv.at("radius"), "radius"), density);
        }
        if (kind == "ellipse") {
            allowed.push_back("a");
            allowed.push_back("b");
            if (!kv.count("a") || !kv.count("b"))
                throw ConfigError("ellipse requires 'a' and 'b'");
            return Particle::ellipse(parse_number(kv.at("a"), "a"),
                                     parse_number(kv.at("b"), "b"), density);
        }
        if (kind == "fourier") {
            allowed.push_back("coefficients");
            if (!kv.count("coefficients"))
                throw ConfigError("fourier requires 'coefficients'");
            return Particle::fourier(
                parse_number_list(kv.at("coefficients"), "coefficients"), density);
        }
        throw ConfigError("unknown particle kind: " + kind);
    }();
    for (const auto& [key, value] : kv) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown particle key: " + key);
    }
    return particle;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "hardpair: contact geometry, scattering families, event dynamics, and "
        "collision-invariant analysis for a pair of identical convex particles"};
    app.require_subcommand(1);
    int exit_code = 0;

    ContactArgs ca;
    auto* contact = app.add_subcommand(
        "contact", "closest-approach frame for a collision configuration");
    add_common(contact, ca.particle_path, ca.format, ca.out_path, ca.check);
    contact->add_option("--beta", ca.beta, "configuration theta1,theta2,psi")
        ->required()->expected(3)->delimiter(',');
    contact->add_option("--tol", ca.tol, "check tolerance")->check(CLI::PositiveNumber);
    contact->callback([&] { exit_code = cmd_contact(ca); });

    ScatterArgs sa;
    auto* scatter = app.add_subcommand("scatter", "scattering matrix at a configuration");
    add_common(scatter, sa.particle_path, sa.format, sa.out_path, sa.check);
    scatter->add_option("--beta", sa.beta, "configuration theta1,theta2,psi")
        ->required()->expected(3)->delimiter(',');
    scatter->add_option("--family", sa.family, "physical | almost_physical")
        ->check(CLI::IsMember({"physical", "almost_physical", "almost"}));
    scatter->add_option("--velocity", sa.velocity, "pair velocity v,vbar,omega,omegabar")
        ->expected(6)->delimiter(',');
    scatter->add_option("--tol", sa.tol, "check tolerance")->check(CLI::PositiveNumber);
    scatter->callback([&] { exit_code = cmd_scatter(sa); });

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "event-driven pair dynamics");
    add_common(simulate, ma.particle_path, ma.format, ma.out_path, ma.check);
    simulate->add_option("--state", ma.state, "x1,x2,theta1,xbar1,xbar2,theta2")
        ->required()->expected(6)->delimiter(',');
    simulate->add_option("--velocity", ma.velocity, "v,vbar,omega,omegabar")
        ->required()->expected(6)->delimiter(',');
    simulate->add_option("--time", ma.time, "horizon")->required();
    simulate->add_option("--family", ma.family, "physical | almost_physical")
        ->check(CLI::IsMember({"physical", "almost_physical", "almost"}));
    simulate->add_option("--sample-dt", ma.sample_dt, "record cadence (default T/100)");
    simulate->add_option("--scan-dt", ma.scan_dt, "post-hoc separation scan step")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--events", ma.events_path, "write events to this file");
    simulate->callback([&] { exit_code = cmd_simulate(ma); });

    OrbitArgs oa;
    auto* orbit = app.add_subcommand(
        "orbit", "reflection-orbit sampling and canonical-sphere coverage");
    add_common(orbit, oa.particle_path, oa.format, oa.out_path, oa.check);
    orbit->add_option("--pair", oa.pair, "orientations theta1,theta2")
        ->expected(2)->delimiter(',');
    orbit->add_option("--energy", oa.energy, "energy norm e");
    orbit->add_option("--momentum", oa.momentum, "total momentum px,py")
        ->expected(2)->delimiter(',');
    orbit->add_option("--seed", oa.seed, "sampling seed");
    orbit->add_option("--samples", oa.samples, "number of orbit points");
    orbit->add_option("--word-length", oa.word_length, "reflections per point");
    orbit->add_option("--resolution", oa.resolution, "bins per sphere angle")
        ->check(CLI::PositiveNumber);
    orbit->callback([&] { exit_code = cmd_orbit(oa); });

    InvariantsArgs ia;
    auto* invariants = app.add_subcommand(
        "invariants", "null space of the collision-invariant functional equation");
    add_common(invariants, ia.particle_path, ia.format, ia.out_path, ia.check);
    invariants->add_option("--family", ia.family, "physical | almost_physical")
        ->check(CLI::IsMember({"physical", "almost_physical", "almost"}));
    invariants->add_option("--degree", ia.degree, "monomial total degree cap");
    invariants->add_option("--modes", ia.modes, "Fourier mode cap in theta");
    invariants->add_option("--samples", ia.samples,
                           "residual sample count (default 40x basis size)");
    invariants->add_option("--tol", ia.tol, "null singular-value tolerance")
        ->check(CLI::PositiveNumber);
    invariants->add_option("--seed", ia.seed, "sampling seed");
    invariants->callback([&] { exit_code = cmd_invariants(ia); });

    WitnessArgs wa;
    auto* witness = app.add_subcommand(
        "witness", "search for an approaching fixed point of the almost-physical family");
    add_common(witness, wa.particle_path, wa.format, wa.out_path, wa.check);
    witness->add_option("--budget", wa.budget, "number of sampled configurations");
    witness->callback([&] { exit_code = cmd_witness(wa); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return exit_code;
}

}  // namespace hardpair
