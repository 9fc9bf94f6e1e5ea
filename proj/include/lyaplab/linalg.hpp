#pragma once

#include <cmath>

namespace lyaplab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {x * c, y * c}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

/// Ambient 3-vector used for all surface models.  Euclidean points keep z = 0;
/// sphere points live on |v| = 1; hyperboloid points on <v,v>_M = -1, z > 0.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {x * c, y * c, z * c}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    /// Minkowski pairing with signature (+, +, -).
    double mdot(const Vec3& o) const { return x * o.x + y * o.y - z * o.z; }

    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    /// Lorentzian cross product: <mcross(u,v), w> = det(u, v, w) under mdot.
    Vec3 mcross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, -(x * o.y - y * o.x)};
    }
};

/// 2x2 real matrix; the one-step derivative cocycle of every map in this
/// project is carried around as one of these.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }
    static Mat2 shear(double c) { return {1.0, c, 0.0, 1.0}; }
    static Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double c) const { return {a11 * c, a12 * c, a21 * c, a22 * c}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    double norm_inf() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }
    double norm_fro() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }

    /// Largest singular value (closed form for 2x2).
    double op_norm() const {
        const double f2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double d = det();
        const double disc = std::max(0.0, f2 * f2 - 4.0 * d * d);
        return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
    }

    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22);
    }
};

} // namespace lyaplab
