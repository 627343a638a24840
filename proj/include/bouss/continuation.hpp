/**
 * @file continuation.hpp
 * @brief Traces the slow branch in lambda and the fast branch in s, monitors
 *        nodal and regime constraints, and classifies branch termination.
 *
 * Predictor is a secant in the natural parameter with a pseudo-arclength
 * fallback when the secant direction turns by more than the configured angle.
 * A step that would land outside the admissible region (nonpositive
 * ellipticity gap, s beyond the Gamma_1 boundary) is never solved; the step
 * is halved instead. A nodal-pattern failure aborts the branch, it is never
 * silently skipped.
 */

#pragma once

#include <string>

#include "bouss/solver.hpp"

namespace bouss {

enum class TerminationReason {
    LossOfEllipticity,
    StagnationLimit,
    Blowup,
    NodalViolation,
    NewtonFailureAfterRefinement,
    ParameterRangeExhausted
};

const char* to_string(TerminationReason r);

enum class NodalPattern { Slow, Fast };

/// Sign and monotonicity pattern of a profile: u > 0 on R and u' < 0 on R+
/// for both patterns; eta < 0, eta' > 0 (slow) or eta > 0, eta' < 0 (fast).
struct NodalFlags {
    bool u_positive = false;
    bool eta_signed = false;    // eta < 0 (slow) / eta > 0 (fast)
    bool u_decreasing = false;  // on x > 0
    bool eta_monotone = false;  // increasing (slow) / decreasing (fast) on x > 0

    bool all() const { return u_positive && eta_signed && u_decreasing && eta_monotone; }
};

/// Strict-sign checks with tolerance: a sample violates the pattern only if
/// it exceeds `tol` on the wrong side. Derivatives by centered differences.
NodalFlags nodal_check(const WaveProfile& p, NodalPattern pattern, double tol = 1e-10);

/// Upper bound for eta(0) in terms of u(0) and (k, s, lambda) on the fast
/// branch; reduces to the exact relation eta = u/(lambda - u) at s = 0.
double eta_upper_bound_fast(double u0, double k, double s, double lambda);

struct DiagnosticsReport {
    double residual_sup = 0.0;
    NodalFlags nodal;
    double ellipticity_gap = 0.0;   // slow: 1 - lambda^2 t; fast: Gamma_1 gap
    double stagnation_gap = 0.0;    // fast: lambda - max u; NaN on the slow branch
    double blowup_quantity = 0.0;   // C2 norm + lambda + 1/dist(boundary)
    double u_crest = 0.0;
    double eta_crest = 0.0;
    double decay_rate = 0.0;        // NaN when the tail is below noise
    double eta_bound_slack = 0.0;   // fast: bound - eta(0); NaN on the slow branch
    double sigma_min = 0.0;
};

struct BranchPoint {
    WaveProfile profile;
    double param = 0.0;  // lambda (slow) or s (fast)
    DiagnosticsReport diagnostics;
};

enum class FamilyKind { Slow, Fast };

struct StepSettings {
    double initial_step = 0.0;          // 0 -> per-family default
    double max_step = 0.0;              // 0 -> per-family default
    double min_step_fraction = 1e-8;    // refinement floor relative to initial step
    double gap_tol = 1e-3;
    double stag_tol = 1e-3;
    double blowup_max = 1e6;
    double secant_angle_deg = 60.0;
    double tail_tol = 1e-8;
    int max_points = 4000;
    NewtonSettings newton;
};

struct Branch {
    FamilyKind kind = FamilyKind::Slow;
    double beta = 0.0;     // slow
    double k = 0.0;        // fast
    double lambda = 0.0;   // fast wave speed (slow: starting speed 0)
    std::vector<BranchPoint> points;
    TerminationReason reason = TerminationReason::ParameterRangeExhausted;
    std::string detail;
};

/// What stopped the stepping loop, before precedence classification.
enum class StopCause { RangeExhausted, NewtonFailure, NodalFailure, PointBudget };

/// Precedence: loss of ellipticity, stagnation (fast), blowup, nodal
/// violation, Newton failure, exhausted range.
TerminationReason classify_termination(const std::vector<BranchPoint>& history,
                                       StopCause cause, FamilyKind kind,
                                       const StepSettings& settings);

DiagnosticsReport make_diagnostics(const WaveProfile& p, const SlowFamily& fam,
                                   double residual_sup, double sigma_min);
DiagnosticsReport make_diagnostics(const WaveProfile& p, const FastFamily& fam,
                                   double residual_sup, double sigma_min);

/// Trace the slow branch from the stationary wave up to lambda_max.
Branch continue_slow(double beta, double lambda_max, const StepSettings& settings = {},
                     const Grid* grid = nullptr);

/// Trace the fast branch from the classical Boussinesq wave up to s_max.
Branch continue_fast(double lambda, double k, double s_max,
                     const StepSettings& settings = {}, const Grid* grid = nullptr);

/// Default grids: L = 30 max(beta, 1) for the slow family, L = 30 max(1,
/// lambda/sqrt(3(lambda^2-1))) for the fast family, n = 2048.
Grid default_slow_grid(double beta, int n = 2048);
Grid default_fast_grid(double lambda, int n = 2048);

}  // namespace bouss
