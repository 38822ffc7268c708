// invariants.cpp - canonical sphere maps, orbit machinery, null-space solver.
#include "hardpair/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardpair/errors.hpp"
#include "hardpair/linalg.hpp"
#include "hardpair/rng.hpp"

namespace hardpair {

namespace {

double canonical_radius(const EnergyMomentum& ep, double m) {
    if (ep.e * ep.e <= ep.p.norm2() / (2.0 * m) + 1e-12)
        throw ConfigError("degenerate energy-momentum manifold: e^2 <= |p|^2/(2m)");
    return std::sqrt(2.0 * ep.e * ep.e - ep.p.norm2() / m);
}

double clamp_unit(double x) { return std::min(1.0, std::max(-1.0, x)); }

}  // namespace

EnergyMomentum energy_momentum(const Vec6& V, double m, double J) {
    EnergyMomentum ep;
    const double e2 = m * (V[0] * V[0] + V[1] * V[1] + V[2] * V[2] + V[3] * V[3]) +
                      J * (V[4] * V[4] + V[5] * V[5]);
    ep.e = std::sqrt(e2);
    ep.p = Vec2{m * (V[0] + V[2]), m * (V[1] + V[3])};
    return ep;
}

Vec4 canonical_map(const Vec6& V, const EnergyMomentum& ep, double m, double J) {
    const double r = canonical_radius(ep, m);
    const double sm = std::sqrt(m), sj = std::sqrt(J);
    const double P1 = sm * V[0], P2 = sm * V[1], P3 = sm * V[2], P4 = sm * V[3];
    const double P5 = sj * V[4], P6 = sj * V[5];
    const double s2 = std::sqrt(2.0);
    return Vec4{(P1 - P3) / r, (P2 - P4) / r, s2 * P5 / r, s2 * P6 / r};
}

Vec6 canonical_inverse(const Vec4& w, const EnergyMomentum& ep, double m, double J) {
    const double r = canonical_radius(ep, m);
    const double sm = std::sqrt(m), sj = std::sqrt(J);
    const double s2 = std::sqrt(2.0);
    const double q1 = ep.p.x / sm, q2 = ep.p.y / sm;
    const double P1 = 0.5 * (r * w[0] + q1);
    const double P2 = 0.5 * (r * w[1] + q2);
    const double P3 = 0.5 * (q1 - r * w[0]);
    const double P4 = 0.5 * (q2 - r * w[1]);
    const double P5 = r * w[2] / s2;
    const double P6 = r * w[3] / s2;
    return Vec6{P1 / sm, P2 / sm, P3 / sm, P4 / sm, P5 / sj, P6 / sj};
}

Vec4 mu_vector(const CollisionFrame& f, double m, double J) {
    const Vec2 de = f.d * unit_vector(f.psi);
    const double a = (f.r - de).perp().dot(f.N);
    const double b = f.r.perp().dot(f.N);
    const double lambda = 2.0 / m + (a * a + b * b) / J;
    const double s = std::sqrt(2.0 / lambda);
    const double s2 = std::sqrt(2.0);
    return Vec4{s * f.N.x / std::sqrt(m), s * f.N.y / std::sqrt(m),
                s * a / (s2 * std::sqrt(J)), -s * b / (s2 * std::sqrt(J))};
}

Vec4 xi_vector(const CollisionFrame& f) {
    return Vec4{f.n.x, f.n.y, -f.p.perp().dot(f.n), f.q.perp().dot(f.n)};
}

int span_rank(const Particle& particle, double theta1, double theta2, double m,
              double J, int n_samples) {
    if (n_samples < 4) throw ConfigError("span_rank requires at least 4 samples");
    Matrix A(n_samples, 4);
    for (int i = 0; i < n_samples; ++i) {
        const double psi = kTwoPi * i / n_samples;
        const Vec4 mu =
            mu_vector(collision_frame(particle, theta1, theta2, psi), m, J);
        for (int j = 0; j < 4; ++j) A(i, j) = mu[j];
    }
    const SvdResult svd = jacobi_svd(A);
    int rank = 0;
    for (double s : svd.sigma)
        if (s > 1e-8 * svd.sigma.front()) ++rank;
    return rank;
}

std::vector<Vec6> orbit_sample(const Particle& particle, double theta1,
                               double theta2, const EnergyMomentum& ep, double m,
                               double J, std::uint64_t seed, int word_length,
                               int count) {
    const Vec6 start = canonical_inverse(Vec4{1, 0, 0, 0}, ep, m, J);
    const double sm = std::sqrt(m), sj = std::sqrt(J);
    Rng rng(seed);
    std::vector<Vec6> points;
    points.reserve(count);
    for (int k = 0; k < count; ++k) {
        Vec6 V = start;
        for (int step = 0; step < word_length; ++step) {
            const double psi = rng.angle();
            const CollisionFrame f = collision_frame(particle, theta1, theta2, psi);
            const Vec6 g = collision_normal(f, m, J).gamma_hat;
            Vec6 P{sm * V[0], sm * V[1], sm * V[2], sm * V[3], sj * V[4], sj * V[5]};
            const double proj = P.dot(g);
            P = P - (2.0 * proj) * g;
            V = Vec6{P[0] / sm, P[1] / sm, P[2] / sm, P[3] / sm, P[4] / sj, P[5] / sj};
        }
        points.push_back(V);
    }
    return points;
}

std::vector<long> orbit_bin_counts(const std::vector<Vec4>& points,
                                   int bin_resolution) {
    if (points.empty()) throw ConfigError("orbit_coverage requires at least one point");
    if (bin_resolution < 1) throw ConfigError("bin resolution must be positive");
    const int res = bin_resolution;
    const int phi_bins = res * res;
    const int total = res * res * phi_bins;
    std::vector<long> counts(static_cast<std::size_t>(total), 0);
    for (const Vec4& w : points) {
        // hyperspherical angles: w = (cos x1, sin x1 cos x2,
        // sin x1 sin x2 cos phi, sin x1 sin x2 sin phi); the substitutions
        // below equidistribute the uniform measure over the bin index cube.
        const double chi1 = std::acos(clamp_unit(w[0]));
        const double u1 = (chi1 - std::sin(chi1) * std::cos(chi1)) / M_PI;
        const double s1 = std::sin(chi1);
        const double c2 = s1 > 1e-14 ? clamp_unit(w[1] / s1) : 1.0;
        const double u2 = 0.5 * (1.0 - c2);
        // the longitude is undefined on the {w3 = w4 = 0} circle; orbits of
        // velocity families that never touch the angular coordinates live
        // there exactly, so pin it instead of binning rounding noise
        double phi = std::hypot(w[2], w[3]) > 1e-9 ? std::atan2(w[3], w[2]) : 0.0;
        if (phi < 0.0) phi += kTwoPi;
        const int i1 = std::min(res - 1, static_cast<int>(u1 * res));
        const int i2 = std::min(res - 1, static_cast<int>(u2 * res));
        const int i3 = std::min(phi_bins - 1,
                                static_cast<int>(phi / kTwoPi * phi_bins));
        ++counts[static_cast<std::size_t>((i1 * res + i2) * phi_bins + i3)];
    }
    return counts;
}

double orbit_coverage(const std::vector<Vec4>& points, int bin_resolution) {
    const std::vector<long> counts = orbit_bin_counts(points, bin_resolution);
    long covered = 0;
    for (long c : counts) covered += c > 0 ? 1 : 0;
    return static_cast<double>(covered) / static_cast<double>(counts.size());
}

double disk_reflection_witness(const Vec2& zeta1, const Vec2& zeta2) {
    if (zeta1.norm() < 1e-12 || zeta2.norm() < 1e-12)
        throw ConfigError("disk_reflection_witness requires unit vectors");
    const Vec2 z1 = (1.0 / zeta1.norm()) * zeta1;
    const Vec2 z2 = (1.0 / zeta2.norm()) * zeta2;
    const double psi1 = std::atan2(z1.y, z1.x);
    const double psi2 = std::atan2(z2.y, z2.x);
    const double psi_mid = 0.5 * (psi1 + psi2);
    const Vec2 u = unit_vector(psi_mid).perp();
    const Vec2 image = z1 - (2.0 * z1.dot(u)) * u;
    if ((image - z2).norm() > 1e-12)
        throw NumericalError("disk reflection witness failed verification");
    return psi_mid;
}

Vec2 disk_canonical_map(const Vec4& V, double e, const Vec2& p) {
    if (e * e <= p.norm2() / 2.0 + 1e-12)
        throw ConfigError("degenerate energy-momentum manifold: e^2 <= |p|^2/2");
    const double r = std::sqrt(2.0 * e * e - p.norm2());
    return Vec2{(V[0] - V[2]) / r, (V[1] - V[3]) / r};
}

Vec4 disk_canonical_inverse(const Vec2& zeta, double e, const Vec2& p) {
    if (e * e <= p.norm2() / 2.0 + 1e-12)
        throw ConfigError("degenerate energy-momentum manifold: e^2 <= |p|^2/2");
    const double r = std::sqrt(2.0 * e * e - p.norm2());
    return Vec4{0.5 * (r * zeta.x + p.x), 0.5 * (r * zeta.y + p.y),
                0.5 * (p.x - r * zeta.x), 0.5 * (p.y - r * zeta.y)};
}

// ---------------------------------------------------------------------------

InvariantBasis::InvariantBasis(int degree, int fourier_modes)
    : degree_(degree), modes_(fourier_modes) {
    if (degree < 0 || fourier_modes < 0)
        throw ConfigError("basis degree and Fourier mode cap must be nonnegative");
    auto angular_label = [](int mode) -> std::string {
        if (mode == 0) return "1";
        const int s = (mode + 1) / 2;
        std::ostringstream os;
        os << (mode % 2 == 1 ? "cos(" : "sin(");
        if (s != 1) os << s;
        os << "theta)";
        return os.str();
    };
    auto monomial_label = [](int i, int j, int k) -> std::string {
        if (i == 0 && j == 0 && k == 0) return "1";
        std::ostringstream os;
        auto emit = [&os](const char* base, int pow) {
            if (pow == 0) return;
            if (os.tellp() > 0) os << "*";
            os << base;
            if (pow > 1) os << "^" << pow;
        };
        emit("v1", i);
        emit("v2", j);
        emit("w", k);
        return os.str();
    };
    // monomials of total degree <= degree with no mixed v-omega products
    for (int total = 0; total <= degree; ++total) {
        for (int i = 0; i <= total; ++i) {
            for (int j = 0; i + j <= total; ++j) {
                const int k = total - i - j;
                if (k > 0 && (i > 0 || j > 0)) continue;
                for (int mode = 0; mode <= 2 * fourier_modes; ++mode) {
                    Term t;
                    t.i = i;
                    t.j = j;
                    t.k = k;
                    t.mode = mode;
                    const std::string ml = monomial_label(i, j, k);
                    const std::string al = angular_label(mode);
                    t.label = ml == "1" ? al : (al == "1" ? ml : ml + "*" + al);
                    terms_.push_back(std::move(t));
                }
            }
        }
    }
}

double InvariantBasis::evaluate(int idx, const Vec2& v, double omega,
                                double theta) const {
    const Term& t = terms_[static_cast<std::size_t>(idx)];
    double value = 1.0;
    for (int a = 0; a < t.i; ++a) value *= v.x;
    for (int a = 0; a < t.j; ++a) value *= v.y;
    for (int a = 0; a < t.k; ++a) value *= omega;
    if (t.mode > 0) {
        const int s = (t.mode + 1) / 2;
        value *= (t.mode % 2 == 1) ? std::cos(s * theta) : std::sin(s * theta);
    }
    return value;
}

double InvariantBasis::evaluate_sum(const std::vector<double>& coeffs, const Vec2& v,
                                    double omega, double theta) const {
    double sum = 0.0;
    for (int idx = 0; idx < size(); ++idx)
        if (coeffs[static_cast<std::size_t>(idx)] != 0.0)
            sum += coeffs[static_cast<std::size_t>(idx)] * evaluate(idx, v, omega, theta);
    return sum;
}

int InvariantBasis::index_of(int i, int j, int k, int mode) const {
    for (int idx = 0; idx < size(); ++idx) {
        const Term& t = terms_[static_cast<std::size_t>(idx)];
        if (t.i == i && t.j == j && t.k == k && t.mode == mode) return idx;
    }
    return -1;
}

namespace {

// Residual of each raw basis function at one sampled (V, beta): the residual
// of a general coefficient vector is the matching linear combination.
void residual_row(const Particle& particle, const InvariantBasis& basis,
                  const Vec6& V, double theta1, double theta2, double psi,
                  ScatterFamily family, double* row) {
    const CollisionFrame f = collision_frame(particle, theta1, theta2, psi);
    const double m = particle.mass(), J = particle.inertia();
    const Mat6 S = family == ScatterFamily::physical ? physical_scattering(f, m, J)
                                                     : almost_physical(f, m, J);
    const Vec6 Vp = S * V;
    const Vec2 v{V[0], V[1]}, vb{V[2], V[3]};
    const Vec2 vp{Vp[0], Vp[1]}, vbp{Vp[2], Vp[3]};
    for (int j = 0; j < basis.size(); ++j) {
        row[j] = basis.evaluate(j, vp, Vp[4], theta1) +
                 basis.evaluate(j, vbp, Vp[5], theta2) -
                 basis.evaluate(j, v, V[4], theta1) -
                 basis.evaluate(j, vb, V[5], theta2);
    }
}

}  // namespace

double invariant_residual(const Particle& particle, const InvariantBasis& basis,
                          const std::vector<double>& coeffs, const Vec6& V,
                          double theta1, double theta2, double psi,
                          ScatterFamily family) {
    if (static_cast<int>(coeffs.size()) != basis.size())
        throw ConfigError("coefficient vector does not match basis size");
    std::vector<double> row(static_cast<std::size_t>(basis.size()));
    residual_row(particle, basis, V, theta1, theta2, psi, family, row.data());
    double sum = 0.0;
    for (int j = 0; j < basis.size(); ++j)
        sum += coeffs[static_cast<std::size_t>(j)] * row[static_cast<std::size_t>(j)];
    return sum;
}

NullspaceResult invariant_nullspace(const Particle& particle, ScatterFamily family,
                                    const InvariantBasis& basis, int n_samples,
                                    double tol, std::uint64_t seed) {
    const int nb = basis.size();
    if (n_samples < 3 * nb)
        throw ConfigError("invariant_nullspace needs n_samples >= 3 x basis size");
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    const double m = particle.mass(), J = particle.inertia();
    const double vs = 1.0 / std::sqrt(m), ws = 1.0 / std::sqrt(J);
    Rng rng(seed);

    // conditioning guard: basis Gram on the sampling measure
    {
        const int ng = std::max(4 * nb, 256);
        Matrix B(ng, nb);
        for (int i = 0; i < ng; ++i) {
            const Vec2 v{vs * rng.normal(), vs * rng.normal()};
            const double w = ws * rng.normal();
            const double th = rng.angle();
            for (int j = 0; j < nb; ++j) B(i, j) = basis.evaluate(j, v, w, th);
        }
        const SvdResult svd = jacobi_svd(B);
        if (svd.sigma.back() <= 1e-12 * svd.sigma.front())
            throw ConfigError(
                "basis Gram matrix is ill-conditioned on the sampling measure; "
                "reduce the monomial degree or the Fourier mode cap");
    }

    Matrix A(n_samples, nb);
    std::vector<double> row(static_cast<std::size_t>(nb));
    for (int i = 0; i < n_samples; ++i) {
        Vec6 V;
        for (int c = 0; c < 4; ++c) V[c] = vs * rng.normal();
        V[4] = ws * rng.normal();
        V[5] = ws * rng.normal();
        const double t1 = rng.angle(), t2 = rng.angle(), ps = rng.angle();
        residual_row(particle, basis, V, t1, t2, ps, family, row.data());
        for (int j = 0; j < nb; ++j) A(i, j) = row[static_cast<std::size_t>(j)];
    }

    const SvdResult svd = jacobi_svd(A);
    NullspaceResult out;
    out.singular_values = svd.sigma;
    const double cutoff = tol * svd.sigma.front();
    for (int j = 0; j < nb; ++j) {
        if (svd.sigma[static_cast<std::size_t>(j)] < cutoff) {
            std::vector<double> vec(static_cast<std::size_t>(nb));
            for (int i = 0; i < nb; ++i) vec[static_cast<std::size_t>(i)] = svd.V(i, j);
            out.null_vectors.push_back(std::move(vec));
        }
    }
    out.dimension = static_cast<int>(out.null_vectors.size());
    return out;
}

InvariantDecomposition decompose_invariant(const InvariantBasis& basis,
                                           const std::vector<double>& coeffs,
                                           double m, double J) {
    if (static_cast<int>(coeffs.size()) != basis.size())
        throw ConfigError("coefficient vector does not match basis size");
    const int nb = basis.size();
    InvariantDecomposition dec;
    dec.a.assign(static_cast<std::size_t>(2 * basis.fourier_modes() + 1), 0.0);

    // structured directions are mutually orthogonal in coefficient space:
    // pure angular coordinates, the two linear coordinates, and the energy
    // combination m v1^2 + m v2^2 + J w^2.
    std::vector<double> remainder = coeffs;
    auto take_coordinate = [&](int idx, double& slot) {
        if (idx < 0) return;
        slot = remainder[static_cast<std::size_t>(idx)];
        remainder[static_cast<std::size_t>(idx)] = 0.0;
    };
    for (int mode = 0; mode <= 2 * basis.fourier_modes(); ++mode)
        take_coordinate(basis.index_of(0, 0, 0, mode),
                        dec.a[static_cast<std::size_t>(mode)]);
    take_coordinate(basis.index_of(1, 0, 0, 0), dec.b.x);
    take_coordinate(basis.index_of(0, 1, 0, 0), dec.b.y);

    const int iv1 = basis.index_of(2, 0, 0, 0);
    const int iv2 = basis.index_of(0, 2, 0, 0);
    const int iw2 = basis.index_of(0, 0, 2, 0);
    if (iv1 >= 0 && iv2 >= 0 && iw2 >= 0) {
        std::vector<double> s(static_cast<std::size_t>(nb), 0.0);
        s[static_cast<std::size_t>(iv1)] = m;
        s[static_cast<std::size_t>(iv2)] = m;
        s[static_cast<std::size_t>(iw2)] = J;
        double num = 0.0, den = 0.0;
        for (int j = 0; j < nb; ++j) {
            num += remainder[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)];
            den += s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)];
        }
        dec.c = num / den;
        for (int j = 0; j < nb; ++j)
            remainder[static_cast<std::size_t>(j)] -= dec.c * s[static_cast<std::size_t>(j)];
    }

    double r2 = 0.0;
    for (double x : remainder) r2 += x * x;
    dec.residual = std::sqrt(r2);
    return dec;
}

}  // namespace hardpair
