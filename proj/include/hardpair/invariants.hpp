// Energy-momentum manifolds, canonical maps onto spheres, reflection-orbit
// exploration, and the functional-equation null space characterizing
// collision invariants.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardpair/contact.hpp"
#include "hardpair/scatter.hpp"
#include "hardpair/vec.hpp"

namespace hardpair {

struct EnergyMomentum {
    double e = 0.0;  // energy norm, e^2 = |MV|^2
    Vec2 p{};        // total linear momentum m(v + vbar)
};

EnergyMomentum energy_momentum(const Vec6& V, double m, double J);

// The level set {V : |MV|^2 = e^2, m(v + vbar) = p} is a 3-sphere when
// e^2 > |p|^2 / (2m); these map it to the unit sphere and back. Both throw
// ConfigError on the degenerate manifold.
Vec4 canonical_map(const Vec6& V, const EnergyMomentum& ep, double m, double J);
Vec6 canonical_inverse(const Vec4& w, const EnergyMomentum& ep, double m, double J);

// Unit 4-vector conjugating physical scattering to the reflection
// I - 2 mu (x) mu on the canonical sphere.
Vec4 mu_vector(const CollisionFrame& frame, double m, double J);

// 4-vector [n, -p^perp.n, (p - d e(psi))^perp.n] from the span argument.
Vec4 xi_vector(const CollisionFrame& frame);

// Numerical rank of span{mu(frame(theta1, theta2, psi)) : psi on a uniform
// grid of n_samples angles}; singular values below 1e-8 x largest count as 0.
int span_rank(const Particle& particle, double theta1, double theta2, double m,
              double J, int n_samples);

// Random words in the scattering generators (psi resampled per letter) applied
// to a fixed start point of M(e, p); one fresh word per returned point.
std::vector<Vec6> orbit_sample(const Particle& particle, double theta1,
                               double theta2, const EnergyMomentum& ep, double m,
                               double J, std::uint64_t seed, int word_length,
                               int count);

// Per-bin hit counts over equal-measure hyperspherical bins of S^3;
// bin_resolution r yields r^4 bins (r x r x r^2 in the three angles).
std::vector<long> orbit_bin_counts(const std::vector<Vec4>& points,
                                   int bin_resolution);

// Fraction of those bins hit by the given canonical points.
double orbit_coverage(const std::vector<Vec4>& points, int bin_resolution);

// Disk case: the reflection I - 2 e(psi')^perp (x) e(psi')^perp with
// psi' = (psi1 + psi2)/2 maps zeta1 to zeta2 exactly; returns psi'.
double disk_reflection_witness(const Vec2& zeta1, const Vec2& zeta2);

// Disk (unit mass) canonical maps between M(e, p) in R^4 and S^1.
Vec2 disk_canonical_map(const Vec4& V, double e, const Vec2& p);
Vec4 disk_canonical_inverse(const Vec2& zeta, double e, const Vec2& p);

// ---------------------------------------------------------------------------
// Collision-invariant candidates: finite basis phi(v, omega, theta) =
// (monomials in v1, v2, omega of bounded total degree, with no mixed
// v-omega products) x (Fourier modes in theta up to the given cap).
class InvariantBasis {
public:
    explicit InvariantBasis(int degree = 2, int fourier_modes = 1);

    int size() const { return static_cast<int>(terms_.size()); }
    int degree() const { return degree_; }
    int fourier_modes() const { return modes_; }
    const std::string& label(int idx) const { return terms_[idx].label; }

    double evaluate(int idx, const Vec2& v, double omega, double theta) const;
    double evaluate_sum(const std::vector<double>& coeffs, const Vec2& v,
                        double omega, double theta) const;

    // Index of v1^i v2^j omega^k times the angular mode (0 -> 1,
    // 2s-1 -> cos(s theta), 2s -> sin(s theta)); -1 if absent.
    int index_of(int i, int j, int k, int mode) const;

private:
    struct Term {
        int i, j, k, mode;
        std::string label;
    };
    std::vector<Term> terms_;
    int degree_, modes_;
};

// phi(v', w', theta1) + phi(vbar', wbar', theta2) - phi(v, w, theta1)
// - phi(vbar, wbar, theta2) with primed values from the chosen family at the
// collision configuration (theta1, theta2, psi).
double invariant_residual(const Particle& particle, const InvariantBasis& basis,
                          const std::vector<double>& coeffs, const Vec6& V,
                          double theta1, double theta2, double psi,
                          ScatterFamily family);

struct NullspaceResult {
    int dimension = 0;
    std::vector<double> singular_values;            // descending
    std::vector<std::vector<double>> null_vectors;  // orthonormal coefficient rows
};

// Assembles the sampled residual system over random (V, beta) pairs and
// returns the right singular directions with singular value < tol x largest.
// Throws ConfigError when the basis Gram matrix is ill-conditioned on the
// sample measure (advice: reduce degree or Fourier modes).
NullspaceResult invariant_nullspace(const Particle& particle, ScatterFamily family,
                                    const InvariantBasis& basis, int n_samples,
                                    double tol, std::uint64_t seed);

struct InvariantDecomposition {
    std::vector<double> a;  // angular part: a0 + sum_s a_{2s-1} cos + a_{2s} sin
    Vec2 b{};               // linear-velocity part
    double c = 0.0;         // energy multiple: c (m|v|^2 + J omega^2)
    double residual = 0.0;  // coefficient-space remainder norm
};

// Least-squares split of a coefficient vector onto the structured form
// a(theta) + b.v + c(m|v|^2 + J omega^2).
InvariantDecomposition decompose_invariant(const InvariantBasis& basis,
                                           const std::vector<double>& coeffs,
                                           double m, double J);

}  // namespace hardpair
