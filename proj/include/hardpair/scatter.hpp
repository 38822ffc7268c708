// Scattering maps for a colliding pair: the reflection family built from the
// collision normal, the contact-impulse ("almost physical") family, the general
// linear energy/momentum-conserving family, and the disk reduction.
#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "hardpair/contact.hpp"
#include "hardpair/vec.hpp"

namespace hardpair {

// Velocity vectors are ordered V = [v1x, v1y, v2x, v2y, w1, w2]: linear
// velocities of both particles followed by the two angular speeds.
// M = diag(sqrt(m) x4, sqrt(J) x2) turns V into quasi-momentum P = MV, in
// which all scattering maps below act as Euclidean reflections.

enum class ScatterFamily { physical, almost_physical };

enum class Classification { pre_collisional, post_collisional, tangential };

struct CollisionNormal {
    Vec6 gamma;      // display normalization: gamma = (1/sqrt(Lambda)) [...]
    Vec6 gamma_hat;  // unit vector M^{-1} gamma
    double Lambda;   // 2/m + |(r - d e)^perp.N|^2/J + |r^perp.N|^2/J
};

Mat6 mass_matrix(double m, double J);
Mat6 mass_matrix_inverse(double m, double J);

// gamma = (1/sqrt(Lambda)) [N, -N, (r - d e(psi))^perp.N, -r^perp.N].
// Positive gamma.V means the separation F grows to first order when the frame
// was assembled at the event elevation psi = angle(x - xbar).
CollisionNormal collision_normal(const CollisionFrame& frame, double m, double J);

// Sign of gamma.V with a tangential band |gamma.V| <= 1e-12.
Classification classify(const Vec6& V, const CollisionNormal& normal);

// sigma = M^{-1}(I - 2 gamma_hat (x) gamma_hat) M: reflects the separation
// rate, conserves linear momentum and kinetic energy, and maps approaching
// states onto receding ones. Generically changes the angular momentum of the
// frame's own contact configuration (the one with the second centre displaced
// by +d e(psi)).
Mat6 physical_scattering(const CollisionFrame& frame, double m, double J);

// u = M^{-1}(I - 2 eta_hat (x) eta_hat) M with eta_hat built from the contact
// normal n and the contact arms p, q: the frictionless contact-impulse law of
// the frame's own contact configuration. Conserves linear momentum, kinetic
// energy, AND the angular momentum of that configuration, but admits fixed
// points with gamma.V < 0 (see find_unphysical_witness), so it does not
// define a non-penetrating flow under the event convention below.
Mat6 almost_physical(const CollisionFrame& frame, double m, double J);

// The two families are one family indexed antipodally in the elevation:
//   physical_scattering(theta1, theta2, psi + pi) == almost_physical(theta1,
//   theta2, psi)
// exactly, because the contact arms and normal flip sign under psi -> psi+pi
// while the support-derivative components of gamma do not. Event resolution
// assembles frames at psi = angle(x - xbar) so that gamma.V is the true
// separation rate; at that elevation physical_scattering acts as the
// frictionless impulse through the actual contact point (and so conserves
// the pair's total angular momentum), while almost_physical corresponds to
// the antipodal contact, generically transfers angular momentum, and can
// leave an approaching state approaching.

// Full linear family: M^{-1}(E1 E1^T + E2 E2^T + sum_i lambda_i Ei Ei^T
// - gamma_hat gamma_hat^T)M where {E1, E2} span total momentum, gamma_hat is
// the collision normal, and {E3, E4, E5} is a deterministic orthonormal
// completion seeded by basis_seed. signs = (+1,+1,+1) recovers
// physical_scattering.
Mat6 general_family(const CollisionFrame& frame, double m, double J,
                    const std::array<int, 3>& signs, std::uint64_t basis_seed);

// Hard-disk reflection on R^4: I - 2 g (x) g with g = (1/sqrt 2)[e(psi), -e(psi)].
Mat4 disk_scattering(double psi);

struct UnphysicalWitness {
    double theta1, theta2, psi;  // collision configuration beta*
    Vec6 V;                      // unit-quasi-norm fixed point of u
    double gamma_dot_v;          // gamma.V < 0: strictly approaching
    double d;                    // contact distance at beta*
};

// Searches `budget` random collision configurations for a velocity V* with
// u V* = V* that is strictly approaching (gamma.V* < -1e-6). V* is the
// normalized projection of the approaching direction -gamma_hat onto the
// orthogonal complement of eta_hat in quasi-momentum coordinates. Returns
// the strongest witness found, or nullopt when gamma_hat and eta_hat are
// parallel at every sampled configuration (always the case for disks).
std::optional<UnphysicalWitness> find_unphysical_witness(const Particle& particle,
                                                         double m, double J,
                                                         int budget);

}  // namespace hardpair
