#include "qjorg/moebius.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace qjorg {

namespace {

Eigen::Vector4d to_vec(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Quaternion from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

bool is_plus_minus_identity(const MatH2& m, double tol) {
    if (!is_zero(m.b, tol) || !is_zero(m.c, tol)) {
        return false;
    }
    for (const double s : {1.0, -1.0}) {
        if (max_abs_diff(m.a, Quaternion{s}) <= tol && max_abs_diff(m.d, Quaternion{s}) <= tol) {
            return true;
        }
    }
    return false;
}

IsometryClass classify_diagonal(const Quaternion& lambda, const Quaternion& mu, double tol) {
    if (std::abs(norm(lambda) - 1.0) <= tol && std::abs(norm(mu) - 1.0) <= tol) {
        return IsometryClass::Elliptic;
    }
    if (im_norm(lambda) <= tol && im_norm(mu) <= tol) {
        return IsometryClass::StrictlyHyperbolic;
    }
    return IsometryClass::Hyperbolic;
}

}  // namespace

const Quaternion& ExtQuaternion::value() const {
    if (!finite_) {
        throw std::logic_error("point at infinity has no finite coordinate");
    }
    return value_;
}

ExtQuaternion apply(const MatH2& m, const ExtQuaternion& z) {
    if (!(det(m) > kZeroTol)) {
        throw std::domain_error("singular matrix");
    }
    if (z.is_infinite()) {
        if (is_zero(m.c)) {
            return ExtQuaternion::infinity();
        }
        return m.a * inverse(m.c);
    }
    const Quaternion& q = z.value();
    const Quaternion denom = m.c * q + m.d;
    if (norm(denom) <= kPoleTol * (1.0 + norm(q))) {
        return ExtQuaternion::infinity();
    }
    return (m.a * q + m.b) * inverse(denom);
}

double distance(const ExtQuaternion& p, const ExtQuaternion& q) {
    if (p.is_infinite() && q.is_infinite()) {
        return 0.0;
    }
    if (p.is_infinite() || q.is_infinite()) {
        return std::numeric_limits<double>::infinity();
    }
    return norm(p.value() - q.value());
}

std::string_view to_string(IsometryClass c) {
    switch (c) {
        case IsometryClass::Elliptic: return "elliptic";
        case IsometryClass::Parabolic: return "parabolic";
        case IsometryClass::Hyperbolic: return "hyperbolic";
        case IsometryClass::StrictlyHyperbolic: return "strictly_hyperbolic";
        case IsometryClass::Identity: return "identity";
        case IsometryClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

std::optional<Quaternion> solve_sylvester(const Quaternion& l, const Quaternion& m, const Quaternion& rhs,
                                          double tol) {
    Eigen::Matrix4d op;
    const Quaternion basis[4] = {Quaternion{1.0}, Quaternion::i(), Quaternion::j(), Quaternion::k()};
    for (int col = 0; col < 4; ++col) {
        op.col(col) = to_vec(l * basis[col] - basis[col] * m);
    }
    const Eigen::Vector4d target = to_vec(rhs);
    Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix4d> cod;
    cod.setThreshold(tol);
    cod.compute(op);
    const Eigen::Vector4d x = cod.solve(target);
    if ((op * x - target).norm() > tol * (1.0 + target.norm())) {
        return std::nullopt;
    }
    return from_vec(x);
}

IsometryClass classify_normal_form(const MatH2& m, double tol) {
    if (!is_zero(m.c, tol) || !in_sigma(m, tol)) {
        return IsometryClass::Unclassified;
    }
    if (is_plus_minus_identity(m, tol)) {
        return IsometryClass::Identity;
    }
    if (is_zero(m.b, tol)) {
        return classify_diagonal(m.a, m.d, tol);
    }
    if (!solve_sylvester(m.a, m.d, m.b, tol)) {
        // Not diagonalizable: a ~ d and, in the group, |a| = |d| = 1.
        return IsometryClass::Parabolic;
    }
    return classify_diagonal(m.a, m.d, tol);
}

FixedPoints fixed_points_normal_form(const MatH2& m, double tol) {
    if (!is_zero(m.c, tol)) {
        throw std::domain_error("fixed_points_normal_form requires an upper-triangular matrix");
    }
    FixedPoints fp;
    if (is_plus_minus_identity(m, tol)) {
        fp.all_points = true;
        return fp;
    }
    if (is_zero(m.b, tol)) {
        fp.points = {Quaternion{}, ExtQuaternion::infinity()};
        return fp;
    }
    if (const auto x = solve_sylvester(m.a, m.d, m.b, tol)) {
        fp.points = {-*x, ExtQuaternion::infinity()};
    } else {
        fp.points = {ExtQuaternion::infinity()};
    }
    return fp;
}

}  // namespace qjorg
