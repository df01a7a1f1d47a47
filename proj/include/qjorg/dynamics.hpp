#pragma once

// Shimizu-Leutbecher iteration S_0 = S, S_{n+1} = S_n T S_n^{-1} and the
// sequence-level checks built on it.

#include <string>
#include <string_view>
#include <vector>

#include "qjorg/ineq.hpp"

namespace qjorg {

/// Shape of T. In Diagonal and Upper mode the displacement quantities use the
/// c-pivot formulas; in Lower mode they use the b-pivot formulas.
enum class IterationMode { Diagonal, Upper, Lower };

std::string_view to_string(IterationMode m);

struct IterationStep {
    int n = 0;
    MatH2 s;
    double bc_norm = 0.0;  // |b_n||c_n|
    double det = 0.0;
    bool has_displacements = false;
    Quaternion tau;
    Quaternion t;
    double tau_c = 0.0;  // |tau_n| |pivot_n|
    double t_c = 0.0;    // |t_n| |pivot_n|
    /// K(1 + |b_n c_n|) in Diagonal mode, |pivot_n| sqrt(|tau_n||t_n|) otherwise.
    double extremal_lhs = 0.0;
};

struct IterationTrace {
    IterationMode mode = IterationMode::Diagonal;
    MatH2 t_matrix;
    std::vector<IterationStep> steps;
    bool truncated = false;
    std::string truncation_reason;
};

struct IterationOptions {
    double divergence_cutoff = 1e8;
    double elementary_cutoff = 1e-10;
    /// Gate tolerance for shapes and group membership.
    double tol = kDefaultTol;
};

/// Runs n_steps conjugations by full matrix products. Step 0 is S itself.
/// Throws std::invalid_argument when n_steps < 1, when S or T is not in the
/// group, or when T does not have the shape `mode` names. Stops early when the
/// pivot entry vanishes (common fixed point), when an entry exceeds the
/// divergence cutoff, or on non-finite values.
IterationTrace iterate(const MatH2& s, const MatH2& t, int n_steps, IterationMode mode,
                       const IterationOptions& opts = {});

/// Picks the mode from T's shape: diagonal, then upper, then lower.
/// Throws std::invalid_argument when T is none of these.
IterationMode mode_for(const MatH2& t, double tol = kDefaultTol);

struct RecurrenceCheck {
    bool passed = true;
    double max_deviation = 0.0;
    int steps_checked = 0;
};

/// Recomputes each S_{n+1} from the entry recurrences
///   a_{n+1} = a_n l d~_n - b_n m c~_n, b_{n+1} = -a_n l b~_n + b_n m a~_n, ...
/// (with the eta terms in triangular modes) and compares them with the
/// matrix-product values. Deviation is measured relative to 1 + max entry norm.
RecurrenceCheck verify_recurrence(const IterationTrace& trace, double tol = 1e-7);

/// Pointwise extremality followed by invariance of the extremal quantity
/// along n_steps of the sequence, with budget tol * (1 + n) at step n.
/// A pass means "constant over the horizon", not a proof of extremality.
TestReport extremal_invariance_check(const MatH2& s, const MatH2& t, int n_steps, IterationMode mode,
                                     const TestOptions& opts = {});

enum class ConvergenceVerdict { ConvergesToElementary, Stationary, Diverges, Undetermined };

std::string_view to_string(ConvergenceVerdict v);

struct ConvergenceResult {
    ConvergenceVerdict verdict = ConvergenceVerdict::Undetermined;
    /// Geometric-mean ratio of |b_n c_n| over the tail; 0 when undefined.
    double rate = 0.0;
    /// max - min of the extremal quantity over the trace.
    double extremal_variation = 0.0;
};

/// Classification, in order:
///   central T                                   -> Stationary
///   divergence cutoff hit                       -> Diverges
///   pivot reached zero                          -> ConvergesToElementary
///   tail ratio < 1 and either |b_n c_n| below the elementary cutoff or, in
///   Diagonal mode, K(1 + |b_n c_n|) < 1 with |b_n c_n| decreasing over the
///   tail (the contraction then continues geometrically) -> ConvergesToElementary
///   extremal quantity varies by less than tol   -> Stationary
///   otherwise (including fewer than 5 steps)    -> Undetermined
ConvergenceResult classify_convergence(const IterationTrace& trace, const IterationOptions& opts = {},
                                       double stationary_tol = 1e-7);

}  // namespace qjorg
