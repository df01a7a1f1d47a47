#include "qjorg/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qjorg/moebius.hpp"

namespace qjorg {

namespace {

constexpr double kEpsNonzeroKappa = 1.0 / (4.0 * std::numbers::sqrt2);
constexpr double kEpsZeroKappa = 0.25;

TestReport make_report(std::string name, const TestOptions& opts) {
    TestReport r;
    r.test_name = std::move(name);
    r.tol = opts.tol;
    return r;
}

void fail_precondition(TestReport& r, std::string note) {
    r.preconditions_met = false;
    r.notes.push_back(std::move(note));
}

void require_sigma(TestReport& r, const MatH2& m, std::string_view label, const TestOptions& opts) {
    if (!in_sigma(m, opts.shape_tol)) {
        fail_precondition(r, std::string(label) + " is not in the determinant-one group (det = " +
                                 std::to_string(det(m)) + ")");
    }
}

// Verdict for a ">= threshold" inequality.
void finalize(TestReport& r) {
    r.margin = r.lhs - r.threshold;
    if (!r.preconditions_met) {
        r.verdict = Verdict::Inconclusive;
    } else if (r.margin < -r.tol) {
        r.verdict = Verdict::Obstruction;
    } else if (std::abs(r.margin) <= r.tol) {
        r.verdict = Verdict::Extremal;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
}

double bc_norm(const MatH2& s) { return norm(s.b) * norm(s.c); }

// True when every entry lies in span{1, u} for a single unit imaginary u.
bool common_complex_slice(const MatH2& s, const MatH2& t, double tol) {
    const Quaternion entries[] = {s.a, s.b, s.c, s.d, t.a, t.b, t.c, t.d};
    const Quaternion* axis = nullptr;
    for (const auto& q : entries) {
        if (im_norm(q) > tol && (axis == nullptr || im_norm(q) > im_norm(*axis))) {
            axis = &q;
        }
    }
    if (axis == nullptr) {
        return true;
    }
    const double ux = axis->x / im_norm(*axis);
    const double uy = axis->y / im_norm(*axis);
    const double uz = axis->z / im_norm(*axis);
    for (const auto& q : entries) {
        const double cx = q.y * uz - q.z * uy;
        const double cy = q.z * ux - q.x * uz;
        const double cz = q.x * uy - q.y * ux;
        if (std::hypot(cx, cy, cz) > tol * (1.0 + norm(q))) {
            return false;
        }
    }
    return true;
}

// Shared gates of the semisimple family; returns (lambda, mu).
std::pair<Quaternion, Quaternion> diagonal_gates(TestReport& r, const MatH2& s, const MatH2& t,
                                                 const TestOptions& opts) {
    require_sigma(r, s, "S", opts);
    require_sigma(r, t, "T", opts);
    if (!is_zero(t.b, opts.shape_tol) || !is_zero(t.c, opts.shape_tol)) {
        fail_precondition(r, "T is not diagonal");
    }
    if (similar(t.a, t.d, opts.shape_tol)) {
        r.diagnostics["lambda_similar_mu"] = 1.0;
        if (common_complex_slice(s, t, opts.shape_tol)) {
            r.notes.push_back("lambda is similar to mu; all entries lie in one complex slice, classical bound applies");
        } else {
            fail_precondition(r, "lambda is similar to mu");
        }
    }
    r.diagnostics["abs_lambda"] = norm(t.a);
    r.diagnostics["abs_mu"] = norm(t.d);
    r.diagnostics["bc_norm"] = bc_norm(s);
    return {t.a, t.d};
}

double threshold_for(double s_val, double eps) { return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - s_val / eps))); }

// Records the |l| <= 1 <= |m| orientation. The reversed orientation is the
// image under conjugation by [[0,1],[1,0]], which leaves every quantity used
// here unchanged once S(l, m) takes its |m| from the larger entry.
void record_orientation(TestReport& r, const Quaternion& lambda, const Quaternion& mu, const TestOptions& opts) {
    const double nl = norm(lambda);
    const double nm = norm(mu);
    const bool swapped = nl > nm + opts.shape_tol;
    r.diagnostics["orientation_swapped"] = swapped ? 1.0 : 0.0;
    if (swapped) {
        r.notes.push_back("diagonal entries swapped to satisfy |lambda| <= 1 <= |mu|");
    }
}

struct TriangularSetup {
    Quaternion lambda, eta, mu;
    double s_val = 0.0;
};

TriangularSetup upper_gates(TestReport& r, const MatH2& s, const MatH2& t, const TestOptions& opts) {
    require_sigma(r, s, "S", opts);
    require_sigma(r, t, "T", opts);
    if (!is_zero(t.c, opts.shape_tol)) {
        fail_precondition(r, "T is not upper-triangular");
    }
    TriangularSetup setup{t.a, t.b, t.d, s_value(t.a, t.d)};
    record_orientation(r, setup.lambda, setup.mu, opts);
    if (std::abs(re(setup.lambda) - re(setup.mu)) > opts.shape_tol) {
        fail_precondition(r, "Re lambda != Re mu");
    }
    r.diagnostics["S"] = setup.s_val;
    r.diagnostics["kappa"] = re(setup.lambda);
    r.diagnostics["abs_c"] = norm(s.c);
    return setup;
}

// lhs = |c| sqrt(|tau0||t0|) for the upper-triangular family.
void upper_lhs(TestReport& r, const MatH2& s, const MatH2& t) {
    if (is_zero(s.c)) {
        fail_precondition(r, "c = 0: S and T share the fixed point inf");
        r.lhs = 0.0;
        return;
    }
    const auto [tau0, t0] = tau0_t0_upper(s, t);
    r.diagnostics["abs_tau0"] = norm(tau0);
    r.diagnostics["abs_t0"] = norm(t0);
    r.lhs = norm(s.c) * std::sqrt(norm(tau0) * norm(t0));
}

}  // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Obstruction: return "obstruction";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Extremal: return "extremal";
        case Verdict::NotExtreme: return "not_extreme";
    }
    return "inconclusive";
}

double k_value(const Quaternion& lambda, const Quaternion& mu) {
    const double dre = re(lambda) - re(mu);
    const double sim = im_norm(lambda) + im_norm(mu);
    return dre * dre + sim * sim;
}

double kellerhals_form(const Quaternion& lambda, const Quaternion& mu, double tol) {
    if (std::abs(norm(lambda) * norm(mu) - 1.0) > tol) {
        throw std::domain_error("kellerhals_form requires |lambda||mu| = 1");
    }
    const double big = std::max(norm(lambda), norm(mu));
    const double tau = 2.0 * std::log(big);
    return 2.0 * (std::cosh(tau) - std::cos(arg(lambda) + arg(mu)));
}

double beta_T(const Quaternion& lambda, const Quaternion& mu) { return k_value(lambda, mu); }

double s_value(const Quaternion& lambda, const Quaternion& mu) {
    const double big = std::max(norm(lambda), norm(mu));
    return big * (im_norm(lambda) + im_norm(mu));
}

Displacements tau0_t0_upper(const MatH2& s, const MatH2& t) {
    if (is_zero(s.c)) {
        throw std::domain_error("c = 0: S and T share the fixed point inf; pair is elementary-suspect");
    }
    const Quaternion& lambda = t.a;
    const Quaternion& eta = t.b;
    const Quaternion& mu = t.d;
    const Quaternion c_inv = inverse(s.c);
    const Quaternion cd = c_inv * s.d;
    const Quaternion ac = s.a * c_inv;
    return {lambda * (-cd) + eta + cd * mu, lambda * ac + eta - ac * mu};
}

Displacements tau0_t0_lower(const MatH2& s, const MatH2& t) {
    if (is_zero(s.b)) {
        throw std::domain_error("b = 0: S and T share the fixed point 0; pair is elementary-suspect");
    }
    const Quaternion& lambda = t.a;
    const Quaternion& eta = t.c;
    const Quaternion& mu = t.d;
    const Quaternion b_inv = inverse(s.b);
    const Quaternion ba = b_inv * s.a;
    const Quaternion db = s.d * b_inv;
    return {mu * (-ba) + eta + ba * lambda, mu * db + eta - db * lambda};
}

TestReport jss_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("jss", opts);
    const auto [lambda, mu] = diagonal_gates(r, s, t, opts);
    const double k = k_value(lambda, mu);
    r.diagnostics["K"] = k;
    r.lhs = k * (1.0 + bc_norm(s));
    r.threshold = 1.0;
    finalize(r);
    return r;
}

TestReport jss2_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("jss2", opts);
    const auto [lambda, mu] = diagonal_gates(r, s, t, opts);
    const double beta = beta_T(lambda, mu);
    const double big_l = 1.0 + std::max(norm(lambda), norm(mu));
    const double k = std::floor(1.0 + bc_norm(s)) + 1.0;
    r.diagnostics["beta_T"] = beta;
    r.diagnostics["L"] = big_l;
    r.diagnostics["k"] = k;
    r.lhs = beta * std::pow(big_l, k);
    r.threshold = 1.0;
    finalize(r);
    return r;
}

TestReport jssc2_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("jssc2", opts);
    const auto [lambda, mu] = diagonal_gates(r, s, t, opts);
    const double beta = beta_T(lambda, mu);
    r.diagnostics["beta_T"] = beta;
    r.lhs = beta * (1.0 + bc_norm(s));
    r.threshold = 1.0;
    finalize(r);
    return r;
}

TestReport hyperbolic_commutator_test(const MatH2& a, const MatH2& b, const TestOptions& opts) {
    auto r = make_report("jh", opts);
    require_sigma(r, a, "A", opts);
    require_sigma(r, b, "B", opts);
    const bool real_diagonal = is_zero(a.b, opts.shape_tol) && is_zero(a.c, opts.shape_tol) &&
                               im_norm(a.a) <= opts.shape_tol && im_norm(a.d) <= opts.shape_tol;
    if (!real_diagonal) {
        fail_precondition(r, "A is not a real diagonal matrix");
    }
    const double k = re(a.a);
    if (real_diagonal && std::abs(std::abs(k) - 1.0) <= opts.shape_tol) {
        fail_precondition(r, "A is not strictly hyperbolic (|k| = 1)");
    }
    if (is_zero(b.c, opts.shape_tol)) {
        fail_precondition(r, "c = 0 in B: A and B share the fixed point inf");
    }
    r.diagnostics["commutator_hypothesis_unverified"] = 1.0;
    r.notes.push_back("strict hyperbolicity of [A, B] is assumed, not verified");

    const double delta_a = foreman_invariants(a).delta;
    const double delta_comm = foreman_invariants(commutator(a, b)).delta;
    const double first = std::abs(delta_a * delta_a - 4.0);
    const double second = std::abs(delta_comm - 2.0);
    r.diagnostics["k"] = k;
    r.diagnostics["delta_A"] = delta_a;
    r.diagnostics["delta_commutator"] = delta_comm;
    r.diagnostics["trace_term"] = first;
    r.diagnostics["commutator_term"] = second;
    r.diagnostics["bc_norm"] = bc_norm(b);
    if (!is_zero(b.c) && k != 0.0) {
        const double spread = (k - 1.0 / k) * (k - 1.0 / k);
        const double re_bsc = re(b.b * conj(parker_short(b).sigma) * b.c);
        r.diagnostics["re_b_sigmabar_c"] = re_bsc;
        r.diagnostics["delta_identity_residual"] = (delta_comm - 2.0) + spread * re_bsc;
    }
    r.lhs = first + second;
    r.threshold = 1.0;
    finalize(r);
    return r;
}

TestReport jg_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("jg", opts);
    const auto setup = upper_gates(r, s, t, opts);
    if (std::abs(re(setup.lambda)) <= opts.shape_tol) {
        fail_precondition(r, "Re lambda = 0: use the Re = 0 form");
    }
    if (setup.s_val > kEpsNonzeroKappa + opts.shape_tol) {
        fail_precondition(r, "S(lambda, mu) > 1/(4 sqrt 2)");
    }
    r.diagnostics["epsilon"] = kEpsNonzeroKappa;
    r.threshold = threshold_for(setup.s_val, kEpsNonzeroKappa);
    upper_lhs(r, s, t);
    finalize(r);
    return r;
}

TestReport rez_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("rez", opts);
    const auto setup = upper_gates(r, s, t, opts);
    const bool re_zero = std::abs(re(setup.lambda)) <= opts.shape_tol && std::abs(re(setup.mu)) <= opts.shape_tol;
    const bool s_zero = setup.s_val <= opts.shape_tol;
    if (!re_zero && !s_zero) {
        fail_precondition(r, "Re lambda = Re mu = 0 fails and S(lambda, mu) != 0");
    }
    if (!re_zero && s_zero) {
        r.notes.push_back("real diagonal entries: S = 0 limit of the Re = 0 form");
    }
    if (setup.s_val > kEpsZeroKappa + opts.shape_tol) {
        fail_precondition(r, "S(lambda, mu) > 1/4");
    }
    r.diagnostics["epsilon"] = kEpsZeroKappa;
    r.threshold = threshold_for(setup.s_val, kEpsZeroKappa);
    upper_lhs(r, s, t);
    finalize(r);
    return r;
}

TestReport eta_normalized_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    if (is_zero(t.b)) {
        throw std::domain_error("eta = 0: normalization by eta is undefined");
    }
    auto r = make_report("jg_eta", opts);
    const auto setup = upper_gates(r, s, t, opts);
    if (std::abs(re(setup.lambda)) <= opts.shape_tol) {
        fail_precondition(r, "Re lambda = 0: use the Re = 0 form");
    }
    const double eta_norm = norm(setup.eta);
    const double s_prime = setup.s_val / (eta_norm * eta_norm);
    if (eta_norm * eta_norm * s_prime > kEpsNonzeroKappa + opts.shape_tol) {
        fail_precondition(r, "|eta|^2 S'(lambda, mu) > 1/(4 sqrt 2)");
    }
    r.diagnostics["S_prime"] = s_prime;
    r.diagnostics["abs_eta"] = eta_norm;
    r.threshold = threshold_for(eta_norm * eta_norm * s_prime, kEpsNonzeroKappa) / eta_norm;

    if (is_zero(s.c)) {
        fail_precondition(r, "c = 0: S and T share the fixed point inf");
    } else {
        const Quaternion eta_inv = inverse(setup.eta);
        const Quaternion c_inv = inverse(s.c);
        const Quaternion cd = c_inv * s.d;
        const Quaternion ac = s.a * c_inv;
        const Quaternion tau0p = setup.lambda * (-cd) * eta_inv + 1.0 + cd * setup.mu * eta_inv;
        const Quaternion t0p = setup.lambda * ac * eta_inv + 1.0 - ac * setup.mu * eta_inv;
        r.diagnostics["abs_tau0_prime"] = norm(tau0p);
        r.diagnostics["abs_t0_prime"] = norm(t0p);
        r.lhs = norm(s.c) * std::sqrt(norm(tau0p) * norm(t0p));
        r.diagnostics["ratio"] = r.lhs / r.threshold;
    }
    finalize(r);
    return r;
}

TestReport waterman_test(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = make_report("wat", opts);
    require_sigma(r, s, "S", opts);
    require_sigma(r, t, "T", opts);
    const Quaternion& lambda = t.a;
    if (!is_zero(t.c, opts.shape_tol) || max_abs_diff(t.b, Quaternion{1.0}) > opts.shape_tol ||
        max_abs_diff(t.a, t.d) > opts.shape_tol) {
        fail_precondition(r, "T is not of the form [[lambda, 1], [0, lambda]]");
    }
    if (std::abs(norm(lambda) - 1.0) > opts.shape_tol) {
        fail_precondition(r, "|lambda| != 1");
    }
    const double im_lambda = im_norm(lambda);
    if (im_lambda > 0.125 + opts.shape_tol) {
        fail_precondition(r, "|Im lambda| > 1/8");
    }
    r.diagnostics["abs_im_lambda"] = im_lambda;
    r.threshold = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 8.0 * im_lambda)));
    if (is_zero(s.c)) {
        fail_precondition(r, "c = 0: S and T share the fixed point inf");
    } else {
        const Quaternion c_inv = inverse(s.c);
        const Quaternion p = s.a * c_inv;
        const Quaternion q = -(c_inv * s.d);
        const double disp_p = distance(apply(t, p), p);
        const double disp_q = distance(apply(t, q), q);
        r.diagnostics["displacement_ac"] = disp_p;
        r.diagnostics["displacement_cd"] = disp_q;
        r.lhs = norm(s.c) * std::sqrt(disp_p) * std::sqrt(disp_q);
    }
    finalize(r);
    return r;
}

TestReport jlt_test(const MatH2& s, const MatH2& t, const TestOptions& opts, JltPivot pivot) {
    const auto [tau0, t0] = tau0_t0_lower(s, t);
    auto r = make_report("jlt", opts);
    require_sigma(r, s, "S", opts);
    require_sigma(r, t, "T", opts);
    if (!is_zero(t.b, opts.shape_tol)) {
        fail_precondition(r, "T is not lower-triangular");
    }
    const Quaternion& lambda = t.a;
    const Quaternion& mu = t.d;
    record_orientation(r, lambda, mu, opts);
    if (std::abs(re(lambda) - re(mu)) > opts.shape_tol) {
        fail_precondition(r, "Re lambda != Re mu");
    }
    const double kappa = re(lambda);
    const double eps = std::abs(kappa) > opts.shape_tol ? kEpsNonzeroKappa : kEpsZeroKappa;
    const double s_val = s_value(lambda, mu);
    if (s_val > eps + opts.shape_tol) {
        fail_precondition(r, "S(lambda, mu) > epsilon");
    }
    const double root = std::sqrt(norm(tau0) * norm(t0));
    const double lhs_b = norm(s.b) * root;
    const double lhs_c = norm(s.c) * root;
    r.diagnostics["kappa"] = kappa;
    r.diagnostics["epsilon"] = eps;
    r.diagnostics["S"] = s_val;
    r.diagnostics["abs_tau0"] = norm(tau0);
    r.diagnostics["abs_t0"] = norm(t0);
    r.diagnostics["lhs_pivot_b"] = lhs_b;
    r.diagnostics["lhs_pivot_c"] = lhs_c;
    r.diagnostics["pivot_is_b"] = pivot == JltPivot::B ? 1.0 : 0.0;
    r.threshold = threshold_for(s_val, eps);
    r.lhs = pivot == JltPivot::B ? lhs_b : lhs_c;
    finalize(r);
    return r;
}

TestReport extremality_criteria(const MatH2& s, const MatH2& t, const TestOptions& opts) {
    auto r = jss_test(s, t, opts);
    const Verdict pointwise = r.verdict;
    r.test_name = "extreme";
    r.diagnostics["jss_verdict_extremal"] = pointwise == Verdict::Extremal ? 1.0 : 0.0;
    if (!r.preconditions_met) {
        return r;
    }
    const Quaternion& lambda = t.a;
    const Quaternion& mu = t.d;
    const bool elliptic = std::abs(norm(lambda) - 1.0) <= opts.shape_tol && std::abs(norm(mu) - 1.0) <= opts.shape_tol;
    // T and -T act identically; use the representative with arg sum in [0, pi].
    double arg_sum = arg(lambda) + arg(mu);
    if (arg_sum > std::numbers::pi) {
        arg_sum = 2.0 * std::numbers::pi - arg_sum;
        r.notes.push_back("angles taken for -T");
    }
    r.diagnostics["elliptic"] = elliptic ? 1.0 : 0.0;
    r.diagnostics["arg_sum"] = arg_sum;

    bool not_extreme = false;
    if (elliptic) {
        const double ad_dev = std::abs(norm(s.a) * norm(s.d) - 1.0);
        r.diagnostics["ad_deviation"] = ad_dev;
        if (arg_sum > 0.0) {
            const double cot_half = 1.0 / std::tan(0.5 * arg_sum);
            const double bound = cot_half * cot_half - 3.0;
            r.diagnostics["cot2_minus_3"] = bound;
            r.diagnostics["min_order_bound"] = std::ceil(2.0 * std::numbers::pi / arg_sum - opts.tol);
            not_extreme = ad_dev > bound + opts.tol;
        }
        r.diagnostics["not_extreme_flag"] = not_extreme ? 1.0 : 0.0;
    } else {
        r.notes.push_back("cot^2 non-extremality criterion applies to elliptic T only");
    }

    if (pointwise == Verdict::Extremal) {
        if (!elliptic) {
            r.verdict = Verdict::Inconclusive;
            r.diagnostics["hyperbolic_equality"] = 1.0;
            r.notes.push_back("equality holds with non-elliptic T; the order-seven conclusion does not cover this case");
            return r;
        }
        const bool angle_ok = arg_sum > 0.0 && arg_sum < std::numbers::pi / 3.0 + opts.tol;
        if (angle_ok && !not_extreme) {
            r.notes.push_back("equality forces T elliptic with 0 < arg sum < pi/3");
            return r;
        }
        r.verdict = Verdict::Inconclusive;
        r.diagnostics["inconsistency"] = 1.0;
        r.notes.push_back(angle_ok ? "equality holds but the cot^2 criterion reports not extreme"
                                   : "equality holds but arg sum is outside (0, pi/3)");
        return r;
    }
    if (pointwise == Verdict::Inconclusive && not_extreme) {
        r.verdict = Verdict::NotExtreme;
    }
    return r;
}

TestReport non_extreme_tau_test(const MatH2& s, const MatH2& t, TriangularSide side, const TestOptions& opts) {
    const bool upper = side == TriangularSide::Upper;
    auto r = make_report(upper ? "nonext_upper" : "nonext_lower", opts);
    require_sigma(r, s, "S", opts);
    require_sigma(r, t, "T", opts);
    if (upper ? !is_zero(t.c, opts.shape_tol) : !is_zero(t.b, opts.shape_tol)) {
        fail_precondition(r, upper ? "T is not upper-triangular" : "T is not lower-triangular");
    }
    if (std::abs(re(t.a) - re(t.d)) > opts.shape_tol) {
        fail_precondition(r, "Re lambda != Re mu");
    }
    const Quaternion& pivot = upper ? s.c : s.b;
    if (is_zero(pivot)) {
        fail_precondition(r, upper ? "c = 0: S and T share the fixed point inf" : "b = 0: S and T share the fixed point 0");
        return r;
    }
    const auto [tau0, t0] = upper ? tau0_t0_upper(s, t) : tau0_t0_lower(s, t);
    r.diagnostics["abs_tau0"] = norm(tau0);
    r.diagnostics["abs_t0"] = norm(t0);
    r.diagnostics["S"] = s_value(t.a, t.d);
    r.threshold = norm(conj(pivot) * s.d + s.a * conj(pivot));
    if (is_zero(tau0) || is_zero(t0)) {
        r.notes.push_back("degenerate displacement");
        r.preconditions_met = false;
        return r;
    }
    r.lhs = norm(tau0 - t0) / (norm(tau0) * norm(t0));
    r.margin = r.lhs - r.threshold;
    if (r.preconditions_met && r.margin > r.tol) {
        r.verdict = Verdict::NotExtreme;
    }
    return r;
}

}  // namespace qjorg
