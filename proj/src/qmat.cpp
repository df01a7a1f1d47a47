#include "qjorg/qmat.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qjorg {

namespace {

// x y x^{-1}, or y when x vanishes.
Quaternion conjugate_by(const Quaternion& x, const Quaternion& y) {
    if (is_zero(x)) {
        return y;
    }
    return x * y * inverse(x);
}


}  // namespace

MatH2 operator*(const MatH2& m, const MatH2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

MatH2 operator*(double s, const MatH2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

MatH2 operator-(const MatH2& m, const MatH2& n) { return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d}; }

double max_entry_norm(const MatH2& m) { return std::max({norm(m.a), norm(m.b), norm(m.c), norm(m.d)}); }

double alpha(const MatH2& m) {
    const double value = norm2(m.a) * norm2(m.d) + norm2(m.b) * norm2(m.c) - 2.0 * re(m.a * conj(m.c) * m.d * conj(m.b));
    return std::max(value, 0.0);
}

double det(const MatH2& m) { return std::sqrt(alpha(m)); }

double det_schur(const MatH2& m) { return norm(m.a * m.d - m.a * m.c * inverse(m.a) * m.b); }

bool in_sigma(const MatH2& m, double tol) { return std::abs(det(m) - 1.0) <= tol; }

KellerhalsFactors kellerhals_factors(const MatH2& m) {
    const auto& [a, b, c, d] = m;
    KellerhalsFactors f;
    f.l[0][0] = d * a - conjugate_by(d, b) * c;
    f.l[0][1] = conjugate_by(b, d) * a - b * c;
    f.l[1][0] = conjugate_by(c, a) * d - c * b;
    f.l[1][1] = a * d - conjugate_by(a, c) * b;

    // r-factors conjugate by the inverse: x^{-1} y x.
    const auto conj_inv = [](const Quaternion& x, const Quaternion& y) {
        return is_zero(x) ? y : inverse(x) * y * x;
    };
    f.r[0][0] = a * d - b * conj_inv(d, c);
    f.r[0][1] = d * conj_inv(b, a) - c * b;
    f.r[1][0] = a * conj_inv(c, d) - b * c;
    f.r[1][1] = d * a - c * conj_inv(a, b);
    return f;
}

TildeSet tilde_set(const MatH2& m) {
    const auto f = kellerhals_factors(m);
    // |l_ij| = det(M), but without the cancellation of alpha at large norms.
    const double scale = std::max(1.0, max_entry_norm(m));
    double smallest = norm(f.l[0][0]);
    for (const auto& row : f.l) {
        for (const auto& x : row) {
            smallest = std::min(smallest, norm(x));
        }
    }
    for (const auto& row : f.r) {
        for (const auto& x : row) {
            smallest = std::min(smallest, norm(x));
        }
    }
    if (!(smallest > 16 * std::numeric_limits<double>::epsilon() * scale * scale)) {
        throw std::domain_error("singular matrix");
    }
    TildeSet t;
    t.d_t = inverse(f.l[0][0]) * m.d;
    t.b_t = inverse(f.l[0][1]) * m.b;
    t.c_t = inverse(f.l[1][0]) * m.c;
    t.a_t = inverse(f.l[1][1]) * m.a;
    t.d_s = m.d * inverse(f.r[0][0]);
    t.b_s = m.b * inverse(f.r[0][1]);
    t.c_s = m.c * inverse(f.r[1][0]);
    t.a_s = m.a * inverse(f.r[1][1]);
    return t;
}

MatH2 inverse(const MatH2& m) {
    const auto t = tilde_set(m);
    return {t.d_t, -t.b_t, -t.c_t, t.a_t};
}

MatH2 inverse_rform(const MatH2& m) {
    const auto t = tilde_set(m);
    return {t.d_s, -t.b_s, -t.c_s, t.a_s};
}

ForemanInvariants foreman_invariants(const MatH2& m) {
    const auto& [a, b, c, d] = m;
    ForemanInvariants inv;
    // factored form; the expanded one with Re(bc conj(d)) is not invariant
    inv.beta = re((a * d - b * c) * conj(a) + (d * a - c * b) * conj(d));
    inv.gamma = norm2(a + d) + 2.0 * re(a * d - b * c);
    inv.delta = re(a) + re(d);
    return inv;
}

ParkerShort parker_short(const MatH2& m) {
    const auto& [a, b, c, d] = m;
    if (!is_zero(c)) {
        const Quaternion cac = c * a * inverse(c);
        return {cac * d - c * b, cac + d};
    }
    if (!is_zero(b)) {
        const Quaternion bdb = b * d * inverse(b);
        return {bdb * a, bdb + a};
    }
    const Quaternion diff = d - a;
    if (!is_zero(diff)) {
        const Quaternion conjugated = diff * a * inverse(diff);
        return {conjugated * d, conjugated + d};
    }
    return {a * conj(a), a + conj(a)};
}

InvariantSet invariants(const MatH2& m) {
    const auto f = foreman_invariants(m);
    const auto ps = parker_short(m);
    return {alpha(m), f.beta, f.gamma, f.delta, ps.sigma, ps.tau};
}

MatH2 normalize_to_sigma(const MatH2& m) {
    const double dm = det(m);
    if (!(dm > kZeroTol)) {
        throw std::domain_error("singular matrix");
    }
    return (1.0 / std::sqrt(dm)) * m;
}

MatH2 commutator(const MatH2& a, const MatH2& b) { return a * b * inverse(a) * inverse(b); }

std::ostream& operator<<(std::ostream& os, const MatH2& m) {
    return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

}  // namespace qjorg
