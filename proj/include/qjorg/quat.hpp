#pragma once

// Real quaternions w + xi + yj + zk over binary64.

#include <cmath>
#include <iosfwd>
#include <utility>

namespace qjorg {

/// Default absolute tolerance for predicates on unit-scale data.
inline constexpr double kDefaultTol = 1e-9;

/// Norm threshold below which an entry counts as zero for case dispatch.
inline constexpr double kZeroTol = 1e-12;

struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w{w_}, x{x_}, y{y_}, z{z_} {}
    // Scalar embedding of the reals.
    constexpr Quaternion(double real) : w{real} {}  // NOLINT(google-explicit-constructor)

    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
constexpr Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }

// Real scalars act componentwise, so s*q and q*s are bitwise identical.
constexpr Quaternion operator*(double s, const Quaternion& q) { return {s * q.w, s * q.x, s * q.y, s * q.z}; }
constexpr Quaternion operator*(const Quaternion& q, double s) { return {q.w * s, q.x * s, q.y * s, q.z * s}; }
constexpr Quaternion operator/(const Quaternion& q, double s) { return {q.w / s, q.x / s, q.y / s, q.z / s}; }

/// Hamilton product; ij = k, jk = i, ki = j.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr double re(const Quaternion& q) { return q.w; }
constexpr Quaternion im(const Quaternion& q) { return {0.0, q.x, q.y, q.z}; }
constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm(const Quaternion& q) { return std::hypot(std::hypot(q.w, q.x), std::hypot(q.y, q.z)); }
/// |Im q|
inline double im_norm(const Quaternion& q) { return std::hypot(q.x, std::hypot(q.y, q.z)); }

inline bool is_zero(const Quaternion& q, double tol = kZeroTol) { return norm(q) <= tol; }

/// conj(q) / |q|^2. Throws std::domain_error for q = 0.
Quaternion inverse(const Quaternion& q);

/// Tolerance predicate for c^{-1} p c = q: equal real parts and equal norms.
bool similar(const Quaternion& p, const Quaternion& q, double tol = kDefaultTol);

/// Argument in [0, pi], built as atan2(|Im q|, Re q). Throws std::domain_error for q = 0.
double arg(const Quaternion& q);

/// Representative Re q + i|Im q| of the similarity class, returned as (re, |im|).
std::pair<double, double> complex_representative(const Quaternion& q);

/// Maximum coordinate-wise absolute difference.
double max_abs_diff(const Quaternion& p, const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qjorg
