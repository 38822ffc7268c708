// scatter.cpp - reflection families in quasi-momentum coordinates.
#include "hardpair/scatter.hpp"

#include <cmath>

#include "hardpair/errors.hpp"
#include "hardpair/rng.hpp"

namespace hardpair {

namespace {

Vec6 apply_diag(const std::array<double, 6>& diag, const Vec6& v) {
    Vec6 out;
    for (int i = 0; i < 6; ++i) out[i] = diag[i] * v[i];
    return out;
}

std::array<double, 6> mass_diag(double m, double J) {
    const double sm = std::sqrt(m), sj = std::sqrt(J);
    return {sm, sm, sm, sm, sj, sj};
}

std::array<double, 6> mass_diag_inv(double m, double J) {
    const double sm = 1.0 / std::sqrt(m), sj = 1.0 / std::sqrt(J);
    return {sm, sm, sm, sm, sj, sj};
}

// M^{-1} R M where R is the quasi-momentum reflection I - 2 sum c_k u_k u_k^T
// assembled by the caller; here specialised to R = I - 2 u u^T.
Mat6 conjugated_reflection(const Vec6& unit, double m, double J) {
    const auto Md = mass_diag(m, J);
    const auto Mi = mass_diag_inv(m, J);
    Mat6 S = Mat6::identity();
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            S(i, j) -= 2.0 * Mi[i] * unit[i] * unit[j] * Md[j];
    return S;
}

// eta_hat: unit quasi-momentum direction of the frictionless contact impulse.
Vec6 eta_hat_vector(const CollisionFrame& f, double m, double J) {
    const double pn = f.p.perp().dot(f.n);
    const double qn = f.q.perp().dot(f.n);
    const double lambda = 2.0 / m + (pn * pn + qn * qn) / J;
    const double sm = std::sqrt(m), sj = std::sqrt(J);
    const double s = 1.0 / std::sqrt(lambda);
    return Vec6{s * f.n.x / sm,  s * f.n.y / sm,  -s * f.n.x / sm,
                -s * f.n.y / sm, s * pn / sj,     -s * qn / sj};
}

}  // namespace

Mat6 mass_matrix(double m, double J) {
    Mat6 M;
    const auto d = mass_diag(m, J);
    for (int i = 0; i < 6; ++i) M(i, i) = d[i];
    return M;
}

Mat6 mass_matrix_inverse(double m, double J) {
    Mat6 M;
    const auto d = mass_diag_inv(m, J);
    for (int i = 0; i < 6; ++i) M(i, i) = d[i];
    return M;
}

CollisionNormal collision_normal(const CollisionFrame& f, double m, double J) {
    const Vec2 de = f.d * unit_vector(f.psi);
    const double aN = (f.r - de).perp().dot(f.N);
    const double bN = f.r.perp().dot(f.N);
    CollisionNormal cn;
    cn.Lambda = 2.0 / m + (aN * aN + bN * bN) / J;
    const double s = 1.0 / std::sqrt(cn.Lambda);
    cn.gamma = Vec6{s * f.N.x, s * f.N.y, -s * f.N.x, -s * f.N.y, s * aN, -s * bN};
    cn.gamma_hat = apply_diag(mass_diag_inv(m, J), cn.gamma);
    return cn;
}

Classification classify(const Vec6& V, const CollisionNormal& normal) {
    const double proj = V.dot(normal.gamma);
    if (std::abs(proj) <= 1e-12) return Classification::tangential;
    return proj < 0.0 ? Classification::pre_collisional
                      : Classification::post_collisional;
}

Mat6 physical_scattering(const CollisionFrame& f, double m, double J) {
    return conjugated_reflection(collision_normal(f, m, J).gamma_hat, m, J);
}

Mat6 almost_physical(const CollisionFrame& f, double m, double J) {
    return conjugated_reflection(eta_hat_vector(f, m, J), m, J);
}

Mat6 general_family(const CollisionFrame& f, double m, double J,
                    const std::array<int, 3>& signs, std::uint64_t basis_seed) {
    for (int s : signs)
        if (s != 1 && s != -1) throw ConfigError("family signs must be +1 or -1");

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::array<Vec6, 6> basis;
    basis[0] = Vec6{inv_sqrt2, 0, inv_sqrt2, 0, 0, 0};  // total momentum, x
    basis[1] = Vec6{0, inv_sqrt2, 0, inv_sqrt2, 0, 0};  // total momentum, y
    basis[5] = collision_normal(f, m, J).gamma_hat;     // reflected direction

    // Deterministic Gram-Schmidt completion {E3, E4, E5}: draw seeded
    // candidates and keep those with a healthy orthogonal remainder.
    Rng rng(basis_seed);
    int have = 0;
    int guard = 0;
    while (have < 3) {
        if (++guard > 1000)
            throw NumericalError("orthonormal completion failed: degenerate seeds");
        Vec6 c;
        for (int i = 0; i < 6; ++i) c[i] = rng.normal();
        for (int k : {0, 1, 5}) c = c - c.dot(basis[k]) * basis[k];
        for (int k = 0; k < have; ++k) c = c - c.dot(basis[2 + k]) * basis[2 + k];
        const double nrm = c.norm();
        if (nrm < 1e-6) continue;
        basis[2 + have] = (1.0 / nrm) * c;
        ++have;
    }

    const double lambda[6] = {1.0,
                              1.0,
                              static_cast<double>(signs[0]),
                              static_cast<double>(signs[1]),
                              static_cast<double>(signs[2]),
                              -1.0};
    const auto Md = mass_diag(m, J);
    const auto Mi = mass_diag_inv(m, J);
    Mat6 S;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                S(i, j) += lambda[k] * Mi[i] * basis[k][i] * basis[k][j] * Md[j];
    return S;
}

Mat4 disk_scattering(double psi) {
    const Vec2 e = unit_vector(psi);
    const Vec4 g{e.x / std::sqrt(2.0), e.y / std::sqrt(2.0),
                 -e.x / std::sqrt(2.0), -e.y / std::sqrt(2.0)};
    Mat4 S = Mat4::identity();
    add_outer(S, -2.0, g, g);
    return S;
}

std::optional<UnphysicalWitness> find_unphysical_witness(const Particle& particle,
                                                         double m, double J,
                                                         int budget) {
    // Fixed sampling seed: the search itself is part of the library contract
    // and must be reproducible without configuration.
    Rng rng(0x9e3779b97f4a7c15ull);
    double best_gap = 0.0;  // 1 - c^2 where c = gamma_hat . eta_hat
    CollisionFrame best_frame{};
    bool found = false;
    for (int k = 0; k < budget; ++k) {
        const double t1 = rng.angle(), t2 = rng.angle(), ps = rng.angle();
        const CollisionFrame f = collision_frame(particle, t1, t2, ps);
        const CollisionNormal cn = collision_normal(f, m, J);
        const Vec6 eta = eta_hat_vector(f, m, J);
        const double c = cn.gamma_hat.dot(eta);
        const double gap = 1.0 - c * c;
        if (gap > best_gap) {
            best_gap = gap;
            best_frame = f;
            found = true;
        }
    }
    if (!found || best_gap <= 1e-12) return std::nullopt;

    const CollisionNormal cn = collision_normal(best_frame, m, J);
    const Vec6 eta = eta_hat_vector(best_frame, m, J);
    const double c = cn.gamma_hat.dot(eta);
    // Project the approaching direction -gamma_hat off eta_hat; the result is
    // a fixed point of u that still strictly decreases the separation.
    Vec6 y = -1.0 * cn.gamma_hat + c * eta;
    y = (1.0 / y.norm()) * y;
    UnphysicalWitness w;
    w.theta1 = best_frame.theta1;
    w.theta2 = best_frame.theta2;
    w.psi = best_frame.psi;
    w.V = apply_diag(mass_diag_inv(m, J), y);
    w.gamma_dot_v = w.V.dot(cn.gamma);
    w.d = best_frame.d;
    if (w.gamma_dot_v >= -1e-6) return std::nullopt;
    return w;
}

}  // namespace hardpair
