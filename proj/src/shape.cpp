// shape.cpp - particle construction, validation, and mass quadrature.
#include "hardpair/shape.hpp"

#include <cmath>
#include <sstream>

#include "hardpair/errors.hpp"

namespace hardpair {

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric halves).
constexpr int kGL = 10;
constexpr double kGLNode[kGL] = {
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
constexpr double kGLWeight[kGL] = {
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

constexpr int kAngularPanels = 32;
constexpr int kValidationGrid = 2048;

}  // namespace

void Particle::support(double phi, double& h, double& h1, double& h2) const {
    switch (kind_) {
        case ShapeKind::disk:
            h = params_[0];
            h1 = 0.0;
            h2 = 0.0;
            return;
        case ShapeKind::ellipse: {
            const double A = params_[0] * params_[0], B = params_[1] * params_[1];
            const double c = std::cos(phi), s = std::sin(phi);
            h = std::sqrt(A * c * c + B * s * s);
            h1 = (B - A) * std::sin(2.0 * phi) / (2.0 * h);
            h2 = ((B - A) * std::cos(2.0 * phi) - h1 * h1) / h;
            return;
        }
        case ShapeKind::fourier: {
            h = params_[0];
            h1 = 0.0;
            h2 = 0.0;
            for (std::size_t k = 1; k < params_.size(); ++k) {
                const double f = 2.0 * static_cast<double>(k);
                const double c = std::cos(f * phi), s = std::sin(f * phi);
                h += params_[k] * c;
                h1 -= params_[k] * f * s;
                h2 -= params_[k] * f * f * c;
            }
            return;
        }
    }
    h = h1 = h2 = 0.0;
}

double Particle::support(double phi) const {
    double h, h1, h2;
    support(phi, h, h1, h2);
    return h;
}

Vec2 Particle::boundary_point(double alpha) const {
    double h, h1, h2;
    support(alpha, h, h1, h2);
    const Vec2 e = unit_vector(alpha);
    return h * e + h1 * e.perp();
}

std::string Particle::kind_name() const {
    switch (kind_) {
        case ShapeKind::disk: return "disk";
        case ShapeKind::ellipse: return "ellipse";
        case ShapeKind::fourier: return "fourier";
    }
    return "?";
}

Particle Particle::disk(double radius, double density) {
    Particle p;
    p.kind_ = ShapeKind::disk;
    p.params_ = {radius};
    p.density_ = density;
    p.validate_and_finish();
    return p;
}

Particle Particle::ellipse(double a, double b, double density) {
    Particle p;
    p.kind_ = ShapeKind::ellipse;
    p.params_ = {a, b};
    p.density_ = density;
    p.validate_and_finish();
    return p;
}

Particle Particle::fourier(std::vector<double> cos_coeffs, double density) {
    Particle p;
    p.kind_ = ShapeKind::fourier;
    p.params_ = std::move(cos_coeffs);
    p.density_ = density;
    p.validate_and_finish();
    return p;
}

void Particle::validate_and_finish() {
    if (!(density_ > 0.0) || !std::isfinite(density_))
        throw ConfigError("particle density must be positive and finite");
    if (params_.empty()) throw ConfigError("particle shape has no parameters");
    for (double v : params_)
        if (!std::isfinite(v)) throw ConfigError("particle shape parameter not finite");
    if (kind_ == ShapeKind::disk && !(params_[0] > 0.0))
        throw ConfigError("disk radius must be positive");
    if (kind_ == ShapeKind::ellipse && (!(params_[0] > 0.0) || !(params_[1] > 0.0)))
        throw ConfigError("ellipse semi-axes must be positive");

    // Strict convexity and positivity on a dense grid.
    h_min_ = 1e300;
    h_max_ = 0.0;
    reach_ = 0.0;
    double curv_min = 1e300;
    for (int i = 0; i < kValidationGrid; ++i) {
        const double phi = kTwoPi * i / kValidationGrid;
        double h, h1, h2;
        support(phi, h, h1, h2);
        h_min_ = std::min(h_min_, h);
        h_max_ = std::max(h_max_, h);
        reach_ = std::max(reach_, std::hypot(h, h1));
        curv_min = std::min(curv_min, h + h2);
    }
    if (!(h_min_ > 0.0))
        throw ConfigError("shape support function must stay positive (degenerate body)");
    if (!(curv_min > 1e-9 * h_max_)) {
        std::ostringstream os;
        os << "shape is not strictly convex: min curvature radius " << curv_min
           << " vs size " << h_max_;
        throw ConfigError(os.str());
    }

    const MassProperties mp = mass_properties(*this);
    mass_ = mp.m;
    inertia_ = mp.J;
    if (!(mass_ > 0.0) || !(inertia_ > 0.0))
        throw ConfigError("shape has non-positive mass or inertia");

    // Centre of mass must sit at the origin (guaranteed by the even,
    // pi-periodic support families; quadrature double-checks).
    Vec2 centroid{0.0, 0.0};
    auto sup = [this](double a, double& h, double& h1, double& h2) {
        support(a, h, h1, h2);
    };
    for (int panel = 0; panel < kAngularPanels; ++panel) {
        const double lo = kTwoPi * panel / kAngularPanels;
        const double half = M_PI / kAngularPanels;
        for (int i = 0; i < kGL; ++i) {
            const double phi = lo + half * (1.0 + kGLNode[i]);
            const double rho = support_ray_radius(sup, phi);
            // inner integral of r^2 over [0, rho] via the radial GL rule
            double radial = 0.0;
            for (int j = 0; j < kGL; ++j) {
                const double r = 0.5 * rho * (1.0 + kGLNode[j]);
                radial += kGLWeight[j] * r * r;
            }
            radial *= 0.5 * rho;
            centroid += (half * kGLWeight[i] * density_ * radial) * unit_vector(phi);
        }
    }
    if (centroid.norm() > 1e-10 * mass_)
        throw ConfigError("shape centre of mass is not at the origin");
}

MassProperties mass_properties(const Particle& particle) {
    auto sup = [&particle](double a, double& h, double& h1, double& h2) {
        particle.support(a, h, h1, h2);
    };
    double m = 0.0, J = 0.0;
    for (int panel = 0; panel < kAngularPanels; ++panel) {
        const double lo = kTwoPi * panel / kAngularPanels;
        const double half = M_PI / kAngularPanels;
        for (int i = 0; i < kGL; ++i) {
            const double phi = lo + half * (1.0 + kGLNode[i]);
            const double rho = support_ray_radius(sup, phi);
            // inner integrals of r and r^3 over [0, rho]
            double r1 = 0.0, r3 = 0.0;
            for (int j = 0; j < kGL; ++j) {
                const double r = 0.5 * rho * (1.0 + kGLNode[j]);
                r1 += kGLWeight[j] * r;
                r3 += kGLWeight[j] * r * r * r;
            }
            r1 *= 0.5 * rho;
            r3 *= 0.5 * rho;
            m += half * kGLWeight[i] * r1;
            J += half * kGLWeight[i] * r3;
        }
    }
    return {particle.density() * m, particle.density() * J};
}

}  // namespace hardpair
