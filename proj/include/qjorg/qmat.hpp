#pragma once

// 2x2 quaternionic matrices: Dieudonne determinant, Kellerhals inverse and
// the conjugacy invariants of Foreman and Parker-Short.

#include <array>
#include <iosfwd>

#include "qjorg/quat.hpp"

namespace qjorg {

/// Row-major [[a, b], [c, d]].
struct MatH2 {
    Quaternion a{1.0};
    Quaternion b{};
    Quaternion c{};
    Quaternion d{1.0};

    static constexpr MatH2 identity() { return {}; }
    static constexpr MatH2 diagonal(const Quaternion& lambda, const Quaternion& mu) { return {lambda, {}, {}, mu}; }

    constexpr bool operator==(const MatH2&) const = default;
};

MatH2 operator*(const MatH2& m, const MatH2& n);
MatH2 operator*(double s, const MatH2& m);
MatH2 operator-(const MatH2& m, const MatH2& n);

/// Largest entry norm.
double max_entry_norm(const MatH2& m);

/// |a|^2|d|^2 + |b|^2|c|^2 - 2 Re(a conj(c) d conj(b)), clamped at 0.
double alpha(const MatH2& m);

/// Dieudonne determinant sqrt(alpha). Total, including a = 0.
double det(const MatH2& m);

/// |ad - a c a^{-1} b|. Partial at a = 0 (throws); used as an independent check of det().
double det_schur(const MatH2& m);

/// Membership in the determinant-one group.
bool in_sigma(const MatH2& m, double tol = kDefaultTol);

/// The eight factors l_ij, r_ij whose inverses build the Kellerhals inverse.
///
/// Each factor contains one conjugation x y x^{-1} by an entry of the matrix
/// (d for l11/r11, b for l12/r12, c for l21/r21, a for l22/r22). When that
/// entry has norm <= kZeroTol the conjugation is replaced by y itself, its
/// limit along real x; the resulting factor still has norm sqrt(alpha) and the
/// inverse entry it feeds is multiplied by the vanishing entry anyway.
struct KellerhalsFactors {
    std::array<std::array<Quaternion, 2>, 2> l{};
    std::array<std::array<Quaternion, 2>, 2> r{};
};

KellerhalsFactors kellerhals_factors(const MatH2& m);

/// a~ = l22^{-1} a, ..., and the right-handed a_~ = a r22^{-1}, ....
/// Both quadruples equal the corresponding entries of the inverse
/// [[d~, -b~], [-c~, a~]].
struct TildeSet {
    Quaternion a_t, b_t, c_t, d_t;  // left: l^{-1} x
    Quaternion a_s, b_s, c_s, d_s;  // right: x r^{-1}
};

/// Throws std::domain_error when det(m) <= kZeroTol.
TildeSet tilde_set(const MatH2& m);

/// Inverse from the l-form [[l11^{-1}d, -l12^{-1}b], [-l21^{-1}c, l22^{-1}a]].
/// Throws std::domain_error when singular.
MatH2 inverse(const MatH2& m);

/// Inverse from the r-form [[d r11^{-1}, -b r12^{-1}], [-c r21^{-1}, a r22^{-1}]].
MatH2 inverse_rform(const MatH2& m);

struct ForemanInvariants {
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

ForemanInvariants foreman_invariants(const MatH2& m);

struct ParkerShort {
    Quaternion sigma;
    Quaternion tau;
};

/// Four-case dispatch on c != 0 / b != 0 / a != d with "!= 0" meaning norm > kZeroTol.
ParkerShort parker_short(const MatH2& m);

struct InvariantSet {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    Quaternion sigma;
    Quaternion tau;
};

InvariantSet invariants(const MatH2& m);

/// m / sqrt(det m). Throws std::domain_error when singular.
MatH2 normalize_to_sigma(const MatH2& m);

/// A B A^{-1} B^{-1}.
MatH2 commutator(const MatH2& a, const MatH2& b);

std::ostream& operator<<(std::ostream& os, const MatH2& m);

}  // namespace qjorg
