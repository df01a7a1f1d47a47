#include "qjorg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qjorg {

namespace {

bool finite(const Quaternion& q) {
    return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

bool finite(const MatH2& m) { return finite(m.a) && finite(m.b) && finite(m.c) && finite(m.d); }

bool is_central(const MatH2& t, double tol) {
    if (!is_zero(t.b, tol) || !is_zero(t.c, tol)) {
        return false;
    }
    for (const double sign : {1.0, -1.0}) {
        if (max_abs_diff(t.a, Quaternion{sign}) <= tol && max_abs_diff(t.d, Quaternion{sign}) <= tol) {
            return true;
        }
    }
    return false;
}

const Quaternion& pivot_of(const MatH2& s, IterationMode mode) { return mode == IterationMode::Lower ? s.b : s.c; }

IterationStep make_step(int n, const MatH2& s, const MatH2& t, IterationMode mode, double k) {
    IterationStep step;
    step.n = n;
    step.s = s;
    step.bc_norm = norm(s.b) * norm(s.c);
    step.det = det(s);
    const Quaternion& pivot = pivot_of(s, mode);
    if (!is_zero(pivot)) {
        const auto disp = mode == IterationMode::Lower ? tau0_t0_lower(s, t) : tau0_t0_upper(s, t);
        step.has_displacements = true;
        step.tau = disp.tau0;
        step.t = disp.t0;
        step.tau_c = norm(disp.tau0) * norm(pivot);
        step.t_c = norm(disp.t0) * norm(pivot);
    }
    if (mode == IterationMode::Diagonal) {
        step.extremal_lhs = k * (1.0 + step.bc_norm);
    } else if (step.has_displacements) {
        step.extremal_lhs = std::sqrt(step.tau_c * step.t_c);
    }
    return step;
}

void check_shape(const MatH2& t, IterationMode mode, double tol) {
    const bool b_zero = is_zero(t.b, tol);
    const bool c_zero = is_zero(t.c, tol);
    const bool ok = (mode == IterationMode::Diagonal && b_zero && c_zero) || (mode == IterationMode::Upper && c_zero) ||
                    (mode == IterationMode::Lower && b_zero);
    if (!ok) {
        throw std::invalid_argument("T does not have the shape required by mode " + std::string(to_string(mode)));
    }
}

}  // namespace

std::string_view to_string(IterationMode m) {
    switch (m) {
        case IterationMode::Diagonal: return "diagonal";
        case IterationMode::Upper: return "upper";
        case IterationMode::Lower: return "lower";
    }
    return "diagonal";
}

std::string_view to_string(ConvergenceVerdict v) {
    switch (v) {
        case ConvergenceVerdict::ConvergesToElementary: return "converges_to_elementary";
        case ConvergenceVerdict::Stationary: return "stationary";
        case ConvergenceVerdict::Diverges: return "diverges";
        case ConvergenceVerdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

IterationMode mode_for(const MatH2& t, double tol) {
    const bool b_zero = is_zero(t.b, tol);
    const bool c_zero = is_zero(t.c, tol);
    if (b_zero && c_zero) {
        return IterationMode::Diagonal;
    }
    if (c_zero) {
        return IterationMode::Upper;
    }
    if (b_zero) {
        return IterationMode::Lower;
    }
    throw std::invalid_argument("T is neither diagonal nor triangular");
}

IterationTrace iterate(const MatH2& s, const MatH2& t, int n_steps, IterationMode mode, const IterationOptions& opts) {
    if (n_steps < 1) {
        throw std::invalid_argument("n_steps must be at least 1");
    }
    if (!in_sigma(s, opts.tol) || !in_sigma(t, opts.tol)) {
        throw std::invalid_argument("S and T must have determinant one");
    }
    check_shape(t, mode, opts.tol);

    IterationTrace trace;
    trace.mode = mode;
    trace.t_matrix = t;
    trace.steps.reserve(static_cast<std::size_t>(n_steps) + 1);
    const double k = k_value(t.a, t.d);
    const bool triangular = mode != IterationMode::Diagonal;

    auto stop = [&](std::string reason) {
        trace.truncated = true;
        trace.truncation_reason = std::move(reason);
    };

    trace.steps.push_back(make_step(0, s, t, mode, k));
    if (triangular && is_zero(pivot_of(s, mode))) {
        stop("common fixed point reached");
        return trace;
    }
    MatH2 current = s;
    for (int n = 1; n <= n_steps; ++n) {
        MatH2 next;
        try {
            next = current * t * inverse(current);
        } catch (const std::domain_error&) {
            stop("precision limit reached");
            break;
        }
        if (!finite(next)) {
            stop("non-finite entries");
            break;
        }
        trace.steps.push_back(make_step(n, next, t, mode, k));
        if (max_entry_norm(next) > opts.divergence_cutoff) {
            stop("divergence cutoff exceeded");
            break;
        }
        if (triangular && is_zero(pivot_of(next, mode))) {
            stop("common fixed point reached");
            break;
        }
        current = next;
    }
    return trace;
}

RecurrenceCheck verify_recurrence(const IterationTrace& trace, double tol) {
    RecurrenceCheck check;
    const MatH2& tm = trace.t_matrix;
    const Quaternion& lambda = tm.a;
    const Quaternion& eta = tm.b;   // upper off-diagonal
    const Quaternion& zeta = tm.c;  // lower off-diagonal
    const Quaternion& mu = tm.d;
    for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
        const auto& [a, b, c, d] = trace.steps[i].s;
        const TildeSet tl = tilde_set(trace.steps[i].s);
        const MatH2 predicted{
            a * lambda * tl.d_t - a * eta * tl.c_t - b * mu * tl.c_t + b * zeta * tl.d_t,
            -a * lambda * tl.b_t + a * eta * tl.a_t + b * mu * tl.a_t - b * zeta * tl.b_t,
            c * lambda * tl.d_t - c * eta * tl.c_t - d * mu * tl.c_t + d * zeta * tl.d_t,
            -c * lambda * tl.b_t + c * eta * tl.a_t + d * mu * tl.a_t - d * zeta * tl.b_t,
        };
        const MatH2& actual = trace.steps[i + 1].s;
        const double scale = 1.0 + max_entry_norm(actual);
        const double dev = std::max({max_abs_diff(predicted.a, actual.a), max_abs_diff(predicted.b, actual.b),
                                     max_abs_diff(predicted.c, actual.c), max_abs_diff(predicted.d, actual.d)}) /
                           scale;
        check.max_deviation = std::max(check.max_deviation, dev);
        ++check.steps_checked;
    }
    check.passed = check.max_deviation <= tol;
    return check;
}

TestReport extremal_invariance_check(const MatH2& s, const MatH2& t, int n_steps, IterationMode mode,
                                     const TestOptions& opts) {
    TestReport pointwise;
    switch (mode) {
        case IterationMode::Diagonal: pointwise = jss_test(s, t, opts); break;
        case IterationMode::Upper: {
            const bool re_zero = std::abs(re(t.a)) <= opts.shape_tol && std::abs(re(t.d)) <= opts.shape_tol;
            const bool s_zero = s_value(t.a, t.d) <= opts.shape_tol;
            pointwise = (re_zero || s_zero) ? rez_test(s, t, opts) : jg_test(s, t, opts);
            break;
        }
        case IterationMode::Lower: pointwise = jlt_test(s, t, opts); break;
    }

    TestReport r = pointwise;
    r.test_name = "extremal_invariance";
    r.diagnostics["pointwise_lhs"] = pointwise.lhs;
    r.notes.insert(r.notes.begin(), "pointwise test: " + pointwise.test_name);
    if (pointwise.verdict != Verdict::Extremal) {
        r.verdict = Verdict::Inconclusive;
        r.notes.push_back("pointwise test is not extremal; invariance not checked");
        return r;
    }

    IterationOptions iter_opts;
    iter_opts.tol = opts.shape_tol;
    const IterationTrace trace = iterate(s, t, n_steps, mode, iter_opts);
    double max_dev = 0.0;
    int first_break = -1;
    for (const auto& step : trace.steps) {
        const bool defined = mode == IterationMode::Diagonal || step.has_displacements;
        const double dev = defined ? std::abs(step.extremal_lhs - pointwise.threshold)
                                   : std::numeric_limits<double>::infinity();
        max_dev = std::max(max_dev, dev);
        if (first_break < 0 && dev > opts.tol * (1.0 + step.n)) {
            first_break = step.n;
        }
    }
    const auto& last = trace.steps.back();
    r.lhs = last.extremal_lhs;
    r.margin = r.lhs - r.threshold;
    r.tol = opts.tol * (1.0 + last.n);
    r.diagnostics["max_deviation"] = max_dev;
    r.diagnostics["steps"] = last.n;
    r.diagnostics["first_break_step"] = first_break;
    if (trace.truncated) {
        r.verdict = Verdict::Inconclusive;
        r.notes.push_back("iteration stopped early: " + trace.truncation_reason);
    } else if (first_break >= 0) {
        r.verdict = Verdict::Inconclusive;
        r.notes.push_back("extremal quantity drifts from the threshold at step " + std::to_string(first_break));
    } else {
        r.verdict = Verdict::Extremal;
        r.notes.push_back("extremal quantity constant over the horizon; consistent with, not a proof of, extremality");
    }
    return r;
}

ConvergenceResult classify_convergence(const IterationTrace& trace, const IterationOptions& opts,
                                       double stationary_tol) {
    ConvergenceResult result;
    const auto& steps = trace.steps;
    if (!steps.empty()) {
        const auto [lo, hi] = std::minmax_element(steps.begin(), steps.end(), [](const auto& x, const auto& y) {
            return x.extremal_lhs < y.extremal_lhs;
        });
        result.extremal_variation = hi->extremal_lhs - lo->extremal_lhs;
    }

    if (is_central(trace.t_matrix, opts.tol)) {
        result.verdict = ConvergenceVerdict::Stationary;
        return result;
    }
    const bool diverged = (trace.truncated && trace.truncation_reason != "common fixed point reached") ||
                          std::any_of(steps.begin(), steps.end(), [&](const auto& st) {
                              return max_entry_norm(st.s) > opts.divergence_cutoff;
                          });
    if (diverged) {
        result.verdict = ConvergenceVerdict::Diverges;
        return result;
    }
    if (trace.truncated) {
        result.verdict = ConvergenceVerdict::ConvergesToElementary;
        return result;
    }
    if (steps.size() < 5) {
        return result;
    }

    const std::size_t tail = std::min<std::size_t>(10, steps.size() - 1);
    double log_sum = 0.0;
    int ratios = 0;
    bool decreasing = true;
    for (std::size_t i = steps.size() - tail; i < steps.size(); ++i) {
        const double prev = steps[i - 1].bc_norm;
        const double cur = steps[i].bc_norm;
        decreasing = decreasing && cur < prev;
        if (prev > 0.0 && cur > 0.0) {
            log_sum += std::log(cur / prev);
            ++ratios;
        }
    }
    const bool has_rate = ratios > 0;
    result.rate = has_rate ? std::exp(log_sum / ratios) : 0.0;

    const double bc_last = steps.back().bc_norm;
    bool certificate = false;
    if (trace.mode == IterationMode::Diagonal) {
        const double k = k_value(trace.t_matrix.a, trace.t_matrix.d);
        certificate = decreasing && k * (1.0 + bc_last) < 1.0;
    }
    if (has_rate && result.rate < 1.0 && (bc_last < opts.elementary_cutoff || certificate)) {
        result.verdict = ConvergenceVerdict::ConvergesToElementary;
        return result;
    }
    if (result.extremal_variation < stationary_tol) {
        result.verdict = ConvergenceVerdict::Stationary;
    }
    return result;
}

}  // namespace qjorg
