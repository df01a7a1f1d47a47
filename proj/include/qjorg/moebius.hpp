#pragma once

// Moebius action Z -> (aZ + b)(cZ + d)^{-1} on H u {inf}, and the
// classification of upper-triangular normal forms.

#include <optional>
#include <string_view>
#include <vector>

#include "qjorg/qmat.hpp"

namespace qjorg {

/// A point of H u {inf}.
class ExtQuaternion {
public:
    constexpr ExtQuaternion() = default;
    constexpr ExtQuaternion(const Quaternion& q) : value_{q} {}  // NOLINT(google-explicit-constructor)

    static constexpr ExtQuaternion infinity() {
        ExtQuaternion p;
        p.finite_ = false;
        return p;
    }

    constexpr bool is_infinite() const { return !finite_; }
    constexpr bool is_finite() const { return finite_; }

    /// Finite coordinate; throws std::logic_error at infinity.
    const Quaternion& value() const;

    constexpr bool operator==(const ExtQuaternion& o) const {
        return finite_ == o.finite_ && (!finite_ || value_ == o.value_);
    }

private:
    Quaternion value_{};
    bool finite_ = true;
};

/// Pole threshold: |cZ + d| <= kPoleTol * (1 + |Z|) maps to infinity.
inline constexpr double kPoleTol = 1e-12;

/// Throws std::domain_error when m is singular.
ExtQuaternion apply(const MatH2& m, const ExtQuaternion& z);

/// Distance between two points; infinite unless both finite or both infinite.
double distance(const ExtQuaternion& p, const ExtQuaternion& q);

enum class IsometryClass { Elliptic, Parabolic, Hyperbolic, StrictlyHyperbolic, Identity, Unclassified };

std::string_view to_string(IsometryClass c);

/// Classifies determinant-one upper-triangular matrices. Anything else is
/// Unclassified: general elements would first need conjugation to triangular
/// form, which is out of scope here.
///
/// Upper-triangular [[l, b], [0, m]] is conjugated to diag(l, m) by
/// [[1, x], [0, 1]] whenever l x - x m = b is solvable; otherwise it is the
/// parabolic normal form.
IsometryClass classify_normal_form(const MatH2& m, double tol = kDefaultTol);

struct FixedPoints {
    bool all_points = false;  // identity sentinel
    std::vector<ExtQuaternion> points;
};

/// Isolated fixed points of an upper-triangular element of the group:
/// {0, inf} for diagonal, {inf} for parabolic, {x, inf} for the
/// diagonalizable triangular case. Throws std::domain_error when not
/// triangular.
FixedPoints fixed_points_normal_form(const MatH2& m, double tol = kDefaultTol);

/// Solves l x - x m = rhs in the least-squares sense; returns std::nullopt
/// when the residual exceeds tol (the Sylvester map is singular iff l ~ m).
std::optional<Quaternion> solve_sylvester(const Quaternion& l, const Quaternion& m, const Quaternion& rhs,
                                          double tol = kDefaultTol);

}  // namespace qjorg
