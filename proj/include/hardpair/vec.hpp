// vec.hpp - small fixed-size vectors/matrices and planar rotation helpers.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hardpair {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

// Wrap an angle difference into (-pi, pi].
inline double wrap_signed(double a) {
    a = std::fmod(a, kTwoPi);
    if (a <= -M_PI) a += kTwoPi;
    if (a > M_PI) a -= kTwoPi;
    return a;
}

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    // Counterclockwise quarter turn: (x, y) -> (-y, x).
    Vec2 perp() const { return {-y, x}; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Unit vector e(a) = (cos a, sin a); e(a).perp() = e(a + pi/2).
inline Vec2 unit_vector(double a) { return {std::cos(a), std::sin(a)}; }

// Rotation by angle t applied to v.
inline Vec2 rotate(double t, Vec2 v) {
    const double c = std::cos(t), s = std::sin(t);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

template <std::size_t N>
struct VecN {
    std::array<double, N> a{};

    double& operator[](std::size_t i) { return a[i]; }
    double operator[](std::size_t i) const { return a[i]; }

    VecN operator+(const VecN& o) const {
        VecN r;
        for (std::size_t i = 0; i < N; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    VecN operator-(const VecN& o) const {
        VecN r;
        for (std::size_t i = 0; i < N; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    VecN operator-() const {
        VecN r;
        for (std::size_t i = 0; i < N; ++i) r.a[i] = -a[i];
        return r;
    }
    VecN operator*(double s) const {
        VecN r;
        for (std::size_t i = 0; i < N; ++i) r.a[i] = a[i] * s;
        return r;
    }
    VecN& operator+=(const VecN& o) {
        for (std::size_t i = 0; i < N; ++i) a[i] += o.a[i];
        return *this;
    }

    double dot(const VecN& o) const {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += a[i] * o.a[i];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm_inf() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

template <std::size_t N>
inline VecN<N> operator*(double s, const VecN<N>& v) { return v * s; }

using Vec4 = VecN<4>;
using Vec6 = VecN<6>;

template <std::size_t N>
struct MatN {
    // Row-major.
    std::array<double, N * N> a{};

    double& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static MatN identity() {
        MatN m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    VecN<N> operator*(const VecN<N>& v) const {
        VecN<N> r;
        for (std::size_t i = 0; i < N; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }
    MatN operator*(const MatN& o) const {
        MatN r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const double v = (*this)(i, k);
                for (std::size_t j = 0; j < N; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }
    MatN operator-(const MatN& o) const {
        MatN r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    MatN transposed() const {
        MatN r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    double norm_inf() const {
        double m = 0.0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

using Mat4 = MatN<4>;
using Mat6 = MatN<6>;

// Outer-product update m += s * u v^T.
template <std::size_t N>
inline void add_outer(MatN<N>& m, double s, const VecN<N>& u, const VecN<N>& v) {
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) += s * u[i] * v[j];
}

}  // namespace hardpair
