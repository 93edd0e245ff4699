#pragma once

#include <cmath>

#include "dense/errors.hpp"
#include "dense/util.hpp"

// Quaternion algebra and the combined rotation+scaling operator acting on
// 3-D vectors. A non-zero quaternion Q factors as |Q| * q with q of unit
// norm; q encodes a rotation about the axis v = (sin(theta)cos(phi),
// sin(theta)sin(phi), cos(theta)) by the angle psi, and |Q| acts as an
// isotropic scale. All functions are pure and operate on value types.

namespace dense {

// Relative vector-part magnitude below which a rotation axis is undefined.
constexpr double kAxisEpsilon = 1e-12;

// Tolerance for the unit-norm precondition of rotation-only operations.
constexpr double kUnitNormTolerance = 1e-6;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

struct Quaternion {
    double a = 0.0;  // scalar part
    double b = 0.0, c = 0.0, d = 0.0;  // vector part

    double norm() const { return std::sqrt(a * a + b * b + c * c + d * d); }
    double norm_sq() const { return a * a + b * b + c * c + d * d; }
    bool is_zero() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0; }

    Quaternion conjugate() const { return {a, -b, -c, -d}; }
    Vec3 vector_part() const { return {b, c, d}; }

    Quaternion operator+(const Quaternion& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Quaternion operator-(const Quaternion& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Quaternion operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
};

// Row-major 3x3 matrix.
struct Mat3 {
    double m[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};

    double operator()(int r, int c) const { return m[r * 3 + c]; }
    double& operator()(int r, int c) { return m[r * 3 + c]; }

    Vec3 apply(const Vec3& w) const {
        return {m[0] * w.x + m[1] * w.y + m[2] * w.z,
                m[3] * w.x + m[4] * w.y + m[5] * w.z,
                m[6] * w.x + m[7] * w.y + m[8] * w.z};
    }

    Mat3 multiply(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
        return r;
    }

    double det() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) -
               m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }
};

// Polar decomposition of a non-zero quaternion: scale = |Q|, rotation angle
// psi in [0, 2*pi), axis direction (theta, phi). When the vector part is too
// small to define an axis, `degenerate` is set and theta = phi = 0.
struct AxisAngleScaling {
    double scale = 1.0;
    double psi = 0.0;    // rotation magnitude, [0, 2*pi)
    double theta = 0.0;  // axis polar angle, [0, pi]
    double phi = 0.0;    // axis azimuth, [0, 2*pi)
    bool degenerate = false;
};

// Full 16-term product; non-commutative (i*j = k but j*i = -k).
inline Quaternion hamilton(const Quaternion& q1, const Quaternion& q2) {
    return {q1.a * q2.a - q1.b * q2.b - q1.c * q2.c - q1.d * q2.d,
            q1.a * q2.b + q1.b * q2.a + q1.c * q2.d - q1.d * q2.c,
            q1.a * q2.c - q1.b * q2.d + q1.c * q2.a + q1.d * q2.b,
            q1.a * q2.d + q1.b * q2.c - q1.c * q2.b + q1.d * q2.a};
}

// Unit quaternion for a rotation by psi about the axis at (theta, phi):
// cos(psi/2) + sin(psi/2) * (vx i + vy j + vz k).
inline Quaternion unit_quat(double psi, double theta, double phi) {
    const double half = 0.5 * psi;
    const double s = std::sin(half);
    const double vx = std::sin(theta) * std::cos(phi);
    const double vy = std::sin(theta) * std::sin(phi);
    const double vz = std::cos(theta);
    return {std::cos(half), s * vx, s * vy, s * vz};
}

// Conjugate divided by squared norm; reduces to the conjugate for unit q.
inline Quaternion quat_inverse(const Quaternion& q) {
    const double n2 = q.norm_sq();
    if (n2 == 0.0) throw InvalidOperatorError("quat_inverse: zero quaternion has no inverse");
    const double inv = 1.0 / n2;
    return {q.a * inv, -q.b * inv, -q.c * inv, -q.d * inv};
}

namespace detail {
inline void require_unit(const Quaternion& q, const char* who) {
    if (std::abs(q.norm() - 1.0) > kUnitNormTolerance)
        throw InvalidOperatorError(std::string(who) + ": quaternion is not unit norm");
}
}  // namespace detail

// Rotates w by unit q via the sandwich product q * W * q^-1 with W the pure
// quaternion (0, w). Length-preserving; the real part of the product
// vanishes identically.
inline Vec3 rotate_sandwich(const Quaternion& q, const Vec3& w) {
    detail::require_unit(q, "rotate_sandwich");
    const Quaternion W{0.0, w.x, w.y, w.z};
    const Quaternion p = hamilton(hamilton(q, W), quat_inverse(q));
    return {p.b, p.c, p.d};
}

// Rotation matrix of a unit quaternion, written so that
// rotation_matrix(q).apply(w) == rotate_sandwich(q, w).
//
// Note: the common axis-angle matrix with entries like vx*vy*(1-C) + vz*S in
// the first row is the transpose of this one; that form rotates the frame
// instead of the vector. The sandwich product is the defining convention
// here, so the matrix below matches it entry for entry.
//
// Every entry is a sum of two-component products, so negating all four
// components leaves the matrix bit-identical: R(q) == R(-q) exactly.
inline Mat3 rotation_matrix(const Quaternion& q) {
    detail::require_unit(q, "rotation_matrix");
    const double a = q.a, b = q.b, c = q.c, d = q.d;
    Mat3 r;
    r(0, 0) = a * a + b * b - c * c - d * d;
    r(0, 1) = 2.0 * (b * c - a * d);
    r(0, 2) = 2.0 * (b * d + a * c);
    r(1, 0) = 2.0 * (b * c + a * d);
    r(1, 1) = a * a - b * b + c * c - d * d;
    r(1, 2) = 2.0 * (c * d - a * b);
    r(2, 0) = 2.0 * (b * d - a * c);
    r(2, 1) = 2.0 * (c * d + a * b);
    r(2, 2) = a * a - b * b - c * c + d * d;
    return r;
}

// Combined operator |Q| * R(Q/|Q|) applied to w. Computed as the sandwich
// product Q * W * conj(Q) / |Q|, which equals the same thing without an
// explicit normalization step.
inline Vec3 apply_operator(const Quaternion& Q, const Vec3& w) {
    const double n = Q.norm();
    if (n == 0.0) throw InvalidOperatorError("apply_operator: zero quaternion is not an operator");
    const Quaternion W{0.0, w.x, w.y, w.z};
    const Quaternion p = hamilton(hamilton(Q, W), Q.conjugate());
    const double inv = 1.0 / n;
    return {p.b * inv, p.c * inv, p.d * inv};
}

// Reverse operator |Q|^-1 * R(q^-1) applied to w; undoes apply_operator.
// Computed as conj(Q) * W * Q / |Q|^3.
inline Vec3 apply_inverse_operator(const Quaternion& Q, const Vec3& w) {
    const double n = Q.norm();
    if (n == 0.0)
        throw InvalidOperatorError("apply_inverse_operator: zero quaternion is not an operator");
    const Quaternion W{0.0, w.x, w.y, w.z};
    const Quaternion p = hamilton(hamilton(Q.conjugate(), W), Q);
    const double inv = 1.0 / (n * n * n);
    return {p.b * inv, p.c * inv, p.d * inv};
}

// Operator composition: applying the result equals applying q1 then q2.
// Norms multiply, so rotation and scaling compose independently.
inline Quaternion compose_operators(const Quaternion& q2, const Quaternion& q1) {
    if (q2.is_zero() || q1.is_zero())
        throw InvalidOperatorError("compose_operators: zero quaternion is not an operator");
    return hamilton(q2, q1);
}

// Recovers (scale, psi, theta, phi) from a non-zero quaternion.
// scale * unit_quat(psi, theta, phi) reconstructs Q up to overall sign
// (q and -q encode the same rotation).
inline AxisAngleScaling decompose(const Quaternion& Q) {
    const double n = Q.norm();
    if (n == 0.0) throw InvalidOperatorError("decompose: zero quaternion is not an operator");
    AxisAngleScaling out;
    out.scale = n;
    const double vnorm = std::sqrt(Q.b * Q.b + Q.c * Q.c + Q.d * Q.d);
    out.psi = wrap_angle_positive(2.0 * std::atan2(vnorm, Q.a));
    if (vnorm / n < kAxisEpsilon) {
        out.degenerate = true;
        out.theta = 0.0;
        out.phi = 0.0;
        return out;
    }
    const double vz = Q.d / vnorm;
    out.theta = std::acos(std::min(1.0, std::max(-1.0, vz)));
    out.phi = wrap_angle_positive(std::atan2(Q.c, Q.b));
    return out;
}

}  // namespace dense
