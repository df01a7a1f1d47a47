#pragma once

// Jorgensen-type inequality evaluators for two-generator subgroups of the
// determinant-one group, and the pointwise extremality criteria.
//
// Every inequality here is a necessary condition for <S, T> to be discrete
// and non-elementary. A report therefore only ever asserts the contrapositive
// (Obstruction: the pair cannot generate such a group), equality (Extremal),
// or, for the non-extremality criteria, NotExtreme. Inconclusive is the
// default and never asserts discreteness.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qjorg/qmat.hpp"

namespace qjorg {

enum class Verdict { Obstruction, Inconclusive, Extremal, NotExtreme };

std::string_view to_string(Verdict v);

struct TestReport {
    std::string test_name;
    double lhs = 0.0;
    double threshold = 0.0;
    double margin = 0.0;  // lhs - threshold
    double tol = 0.0;     // tolerance the verdict was decided with
    Verdict verdict = Verdict::Inconclusive;
    bool preconditions_met = true;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
};

struct TestOptions {
    /// Equality slack for Extremal and strictness slack for Obstruction.
    double tol = 1e-7;
    /// Slack for shape gates: group membership, zero entries, Re/|.| equalities.
    double shape_tol = kDefaultTol;
};

/// (Re l - Re m)^2 + (|Im l| + |Im m|)^2
double k_value(const Quaternion& lambda, const Quaternion& mu);

/// 2(cosh t - cos(arg l + arg m)) with t = 2 log max(|l|, |m|).
/// Requires |l||m| = 1 within tol; throws std::domain_error otherwise.
double kellerhals_form(const Quaternion& lambda, const Quaternion& mu, double tol = kDefaultTol);

/// Closed form of sup_{e,f} |(l - e m e^{-1})(l - f m f^{-1})|. Each factor
/// peaks at sqrt(k_value) when Im(e m e^{-1}) is antipodal to Im l.
double beta_T(const Quaternion& lambda, const Quaternion& mu);

/// |m| (|Im l| + |Im m|) with m the entry of larger norm.
double s_value(const Quaternion& lambda, const Quaternion& mu);

struct Displacements {
    Quaternion tau0;
    Quaternion t0;
};

/// For T = [[l, eta], [0, m]]:
///   tau0 = l(-c^{-1}d) + eta + (c^{-1}d)m,  t0 = l(ac^{-1}) + eta - (ac^{-1})m.
/// Throws std::domain_error when c = 0 (S and T share the fixed point inf).
Displacements tau0_t0_upper(const MatH2& s, const MatH2& t);

/// For T = [[l, 0], [eta, m]]:
///   tau0 = m(-b^{-1}a) + eta + (b^{-1}a)l,  t0 = m(db^{-1}) + eta - (db^{-1})l.
/// Throws std::domain_error when b = 0.
Displacements tau0_t0_lower(const MatH2& s, const MatH2& t);

/// Semisimple form: K(1 + |bc|) >= 1 for diagonal T with l not similar to m.
TestReport jss_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// Weak form beta(T) L^k >= 1, L = 1 + max(|l|, |m|), k = floor(1 + |bc|) + 1.
TestReport jss2_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// beta(T)(1 + |bc|) >= 1.
TestReport jssc2_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// |delta_A^2 - 4| + |delta_[A,B] - 2| >= 1 for A real diagonal diag(k, 1/k).
/// Strict hyperbolicity of [A, B] is a hypothesis that cannot be checked here;
/// it is flagged in the diagnostics.
TestReport hyperbolic_commutator_test(const MatH2& a, const MatH2& b, const TestOptions& opts = {});

/// Upper-triangular T with Re l = Re m != 0, S(l, m) <= 1/(4 sqrt 2):
/// |c| sqrt(|tau0||t0|) >= (1 + sqrt(1 - 4 sqrt2 S)) / 2.
TestReport jg_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// Upper-triangular T with Re l = Re m = 0 (or Im l = Im m = 0, where S = 0),
/// S(l, m) <= 1/4: |c| sqrt(|tau0||t0|) >= (1 + sqrt(1 - 4S)) / 2.
TestReport rez_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// jg_test rescaled by eta != 0. Throws std::domain_error when eta = 0.
TestReport eta_normalized_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// Parabolic T = [[l, 1], [0, l]], |l| = 1, |Im l| <= 1/8:
/// |c| sqrt(|T(ac^{-1}) - ac^{-1}|) sqrt(|T(-c^{-1}d) + c^{-1}d|) >= (1 + sqrt(1 - 8|Im l|)) / 2.
TestReport waterman_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

/// Which entry norm multiplies sqrt(|tau0||t0|) in the lower-triangular test.
enum class JltPivot {
    /// |b|: the image of the upper-triangular test under conjugation by [[0,1],[1,0]].
    B,
    /// |c|, as the inequality is usually printed.
    C,
};

/// Lower-triangular T = [[l, 0], [eta, m]], Re l = Re m = kappa, S <= eps with
/// eps = 1/(4 sqrt 2) for kappa != 0 and 1/4 for kappa = 0. Both pivot
/// variants are always reported in the diagnostics; `pivot` selects the one
/// that decides the verdict. Throws std::domain_error when b = 0.
TestReport jlt_test(const MatH2& s, const MatH2& t, const TestOptions& opts = {}, JltPivot pivot = JltPivot::B);

/// Diagonal T. Runs jss_test and, for the pointwise extremal case, checks that
/// T is elliptic with 0 < arg l + arg m < pi/3 (order bound ceil(2pi/(arg sum)) >= 7).
/// Angles are taken for whichever of T, -T has arg sum <= pi. Equality with a
/// non-elliptic T is reported Inconclusive with the hyperbolic_equality flag.
/// Independently flags NotExtreme when ||ad| - 1| > cot^2((arg l + arg m)/2) - 3
/// for elliptic T.
TestReport extremality_criteria(const MatH2& s, const MatH2& t, const TestOptions& opts = {});

enum class TriangularSide { Upper, Lower };

/// NotExtreme when |tau0 - t0| / (|tau0||t0|) exceeds |conj(c)d + a conj(c)| (upper)
/// or |conj(b)d + a conj(b)| (lower).
TestReport non_extreme_tau_test(const MatH2& s, const MatH2& t, TriangularSide side, const TestOptions& opts = {});

}  // namespace qjorg
