#pragma once

// Second implementation of the quaternion algebra for cross-checks: a
// quaternion q = z1 + z2 j (z1, z2 complex) is the 2x2 complex matrix
// [[z1, z2], [-conj(z2), conj(z1)]], and a 2x2 quaternionic matrix is the
// corresponding 4x4 complex block matrix.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "qjorg/qmat.hpp"

namespace oracle {

using qjorg::MatH2;
using qjorg::Quaternion;
using cd = std::complex<double>;

inline Eigen::Matrix2cd chi(const Quaternion& q) {
    const cd z1(q.w, q.x);
    const cd z2(q.y, q.z);
    Eigen::Matrix2cd m;
    m << z1, z2, -std::conj(z2), std::conj(z1);
    return m;
}

inline Quaternion from_chi(const Eigen::Matrix2cd& m) {
    const cd z1 = 0.5 * (m(0, 0) + std::conj(m(1, 1)));
    const cd z2 = 0.5 * (m(0, 1) - std::conj(m(1, 0)));
    return {z1.real(), z1.imag(), z2.real(), z2.imag()};
}

inline Eigen::Matrix4cd chi(const MatH2& m) {
    Eigen::Matrix4cd out;
    out.block<2, 2>(0, 0) = chi(m.a);
    out.block<2, 2>(0, 2) = chi(m.b);
    out.block<2, 2>(2, 0) = chi(m.c);
    out.block<2, 2>(2, 2) = chi(m.d);
    return out;
}

inline MatH2 from_chi(const Eigen::Matrix4cd& m) {
    return {from_chi(Eigen::Matrix2cd(m.block<2, 2>(0, 0))), from_chi(Eigen::Matrix2cd(m.block<2, 2>(0, 2))),
            from_chi(Eigen::Matrix2cd(m.block<2, 2>(2, 0))), from_chi(Eigen::Matrix2cd(m.block<2, 2>(2, 2)))};
}

inline Quaternion mul(const Quaternion& p, const Quaternion& q) { return from_chi(Eigen::Matrix2cd(chi(p) * chi(q))); }

inline Quaternion inv(const Quaternion& q) { return from_chi(Eigen::Matrix2cd(chi(q).inverse())); }

inline double norm(const Quaternion& q) { return std::sqrt(std::abs(chi(q).determinant())); }

inline MatH2 mul(const MatH2& m, const MatH2& n) { return from_chi(Eigen::Matrix4cd(chi(m) * chi(n))); }

inline MatH2 inv(const MatH2& m) { return from_chi(Eigen::Matrix4cd(chi(m).inverse())); }

/// Dieudonne determinant: the complex determinant of the 4x4 image is its square.
inline double det(const MatH2& m) { return std::sqrt(std::abs(chi(m).determinant())); }

inline double entry_dist(const Quaternion& p, const Quaternion& q) {
    return std::hypot(std::hypot(p.w - q.w, p.x - q.x), std::hypot(p.y - q.y, p.z - q.z));
}

inline double matrix_dist(const MatH2& m, const MatH2& n) {
    return std::max({entry_dist(m.a, n.a), entry_dist(m.b, n.b), entry_dist(m.c, n.c), entry_dist(m.d, n.d)});
}

/// Deterministic random source for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double normal() { return normal_(gen_); }

    Quaternion quat(double scale = 1.0) { return {scale * normal(), scale * normal(), scale * normal(), scale * normal()}; }

    Quaternion unit() {
        const Quaternion q = quat();
        return q / qjorg::norm(q);
    }

    Quaternion unit_imag() {
        Quaternion q{0.0, normal(), normal(), normal()};
        return q / qjorg::norm(q);
    }

    /// Unit quaternion with the given argument and a random imaginary axis.
    Quaternion unit_with_arg(double theta) { return Quaternion{std::cos(theta)} + std::sin(theta) * unit_imag(); }

    MatH2 matrix(double scale = 1.0) { return {quat(scale), quat(scale), quat(scale), quat(scale)}; }

    MatH2 sigma() {
        const MatH2 m = matrix();
        return (1.0 / std::sqrt(oracle::det(m))) * m;
    }

    /// diag(l, m) in the group: |l||m| = 1.
    MatH2 diagonal_sigma(double log_scale = 0.5) {
        const double r = std::exp(uniform(-log_scale, log_scale));
        return MatH2::diagonal(r * unit(), (1.0 / r) * unit());
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace oracle
