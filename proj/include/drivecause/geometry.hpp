#pragma once

#include <cmath>

namespace drivecause {

/// 2D vector in the scene ground frame (metres, m/s, N, ... depending on use).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// z component of the 3D cross product; positive when `o` is CCW of *this.
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    /// Rotated CCW by `angle` radians.
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
    /// Left-hand normal (CCW quarter turn).
    constexpr Vec2 perp() const { return {-y, x}; }

    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline Vec2 heading_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * M_PI;
    a = std::fmod(a, two_pi);
    if (a <= -M_PI) a += two_pi;
    if (a > M_PI) a -= two_pi;
    return a;
}

/// Force + torque acting on a rigid body.
struct Wrench {
    Vec2 force;
    double torque = 0.0;

    constexpr Wrench operator+(const Wrench& o) const {
        return {force + o.force, torque + o.torque};
    }
    constexpr bool operator==(const Wrench&) const = default;
};

}  // namespace drivecause
