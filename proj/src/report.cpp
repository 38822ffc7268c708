// report.cpp - serialization of library values into versioned records.
#include "hardpair/report.hpp"

#include <cstdio>

namespace hardpair {

json json_of(const Vec2& v) { return json::array({v.x, v.y}); }

json json_of(const Vec4& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json json_of(const Vec6& v) {
    return json::array({v[0], v[1], v[2], v[3], v[4], v[5]});
}

json json_of(const Mat4& m) {
    json flat = json::array();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) flat.push_back(m(i, j));
    return flat;
}

json json_of(const Mat6& m) {
    json flat = json::array();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) flat.push_back(m(i, j));
    return flat;
}

json json_of(const Particle& particle) {
    json j{{"kind", particle.kind_name()},
           {"density", particle.density()},
           {"mass", particle.mass()},
           {"inertia", particle.inertia()}};
    const auto& p = particle.params();
    switch (particle.kind()) {
        case ShapeKind::disk:
            j["radius"] = p[0];
            break;
        case ShapeKind::ellipse:
            j["a"] = p[0];
            j["b"] = p[1];
            break;
        case ShapeKind::fourier:
            j["coefficients"] = p;
            break;
    }
    return j;
}

json json_of(const CollisionFrame& f) {
    return json{{"theta1", f.theta1},
                {"theta2", f.theta2},
                {"psi", f.psi},
                {"d", f.d},
                {"p", json_of(f.p)},
                {"q", json_of(f.q)},
                {"n", json_of(f.n)},
                {"N", json_of(f.N)},
                {"r", json_of(f.r)},
                {"dd_dpsi", f.dd_dpsi},
                {"dd_dtheta", f.dd_dtheta},
                {"alpha_self", f.alpha_self},
                {"alpha_other", f.alpha_other}};
}

json json_of(const Event& e) {
    return json{{"schema", kSchemaSimEvent},
                {"time", e.time},
                {"theta1", e.theta1},
                {"theta2", e.theta2},
                {"psi", e.psi},
                {"d", e.d},
                {"v_pre", json_of(e.v_pre)},
                {"v_post", json_of(e.v_post)},
                {"family", e.family == ScatterFamily::physical ? "physical"
                                                               : "almost_physical"},
                {"pre_class",
                 e.pre_class == Classification::pre_collisional     ? "pre"
                 : e.pre_class == Classification::post_collisional ? "post"
                                                                    : "tangential"}};
}

json json_of(const SystemState& s) {
    return json{{"t", s.t},
                {"x", json_of(s.x)},
                {"theta1", s.theta1},
                {"xbar", json_of(s.xbar)},
                {"theta2", s.theta2},
                {"V", json_of(s.V)}};
}

json sample_record(const TrajectorySample& sample) {
    json j = json_of(sample.state);
    j["schema"] = kSchemaSimRecord;
    j["P"] = json_of(sample.q.P);
    j["E"] = sample.q.E;
    j["A"] = sample.q.A;
    return j;
}

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_row(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_full(values[i]);
    }
    return out;
}

}  // namespace hardpair
