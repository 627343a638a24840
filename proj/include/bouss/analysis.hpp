/**
 * @file analysis.hpp
 * @brief Monotone-front limit algebra, front-nonexistence criteria, and the
 *        closed-form identity checks for the stationary wave.
 *
 * The front-limit formulas are evaluated exactly as stated by the underlying
 * theory; `slow_front_excluded` scans the cubic G(z, t) over z in (0, 1/t^2)
 * and reports exclusion when it is negative throughout.
 */

#pragma once

#include "bouss/model.hpp"

namespace bouss {

/// Downstream limit state of a hypothetical monotone front.
struct FrontLimit {
    double ubar = 0.0;
    double etabar = 0.0;
    double B = 0.0;                   // ellipticity coefficient (slow case)
    double quadratic_residual = 0.0;  // residual of the defining quadratic at ubar
};

/// Slow-family front limit: ubar is the positive root of
///   -(2 - B) u^2 - lambda B u + 2 (1 - lambda^2) B = 0,
/// etabar = -ubar^2 / (2 (1 - lambda^2 - lambda ubar)). Requires B > 0.
FrontLimit front_limit_slow(double lambda, double beta);

/// G(z, t) = (-20 + 13/t) z^3 + (-60 + 33/t + 32t) z^2
///           + (-39 + 18/t + 32t) z - 9,     z = lambda^2, t = 1 + 1/(3 beta^2).
double g_polynomial(double z, double t);
double g_polynomial_z(double z, double t);
double g_polynomial_zz(double z, double t);

struct FrontScanReport {
    double t = 0.0;
    int scan_n = 0;
    double max_g = 0.0;   // maximum of G over the scan
    double z_at_max = 0.0;
    bool excluded = false;  // G < 0 at every scan point
};

/// Scan G(z, t) over z in (0, 1/t^2), endpoint-exclusive; fronts are excluded
/// when G stays negative.
FrontScanReport slow_front_excluded(double beta, int scan_n = 10000);

/// Lower bound for the downstream velocity of a slow monotone front.
double slow_front_lower_bound(double lambda, double B);

/// Fast-family front obstruction: with ubar = (3 lambda - sqrt(lambda^2+8))/2
/// and etabar = ubar/(lambda - ubar), evaluates
///   ubar etabar - (lambda/2) ubar^2 - (lambda/2) etabar^2
///   + ubar^3/6 + (1/2) ubar etabar^2,
/// which is negative for every lambda > 1 (no fast fronts).
double fast_front_obstruction(double lambda);

/// Reduced form (lambda - ubar)(ubar/3 - lambda) + 1; a positive multiple of
/// the full obstruction, vanishing at lambda = 1.
double reduced_obstruction_fast(double lambda);

/// Identity report for a stationary profile: the combination w = u + sqrt2 eta
/// (plus branch) or h = u - sqrt2 eta (minus branch) vanishes identically;
/// it satisfies beta^2 h'' = (1 -+ u/sqrt2) h; and eta solves the steady KdV
/// first integral beta^2 (eta')^2 = eta^2 + (2/3) eta^3.
struct AppendixReport {
    double combo_sup = 0.0;         // |w|_inf or |h|_inf
    double combo_ode_residual = 0.0;
    double kdv_residual = 0.0;
};

AppendixReport appendix_identities(const WaveProfile& p, Sign branch);

/// Threshold constants rederived by bisection on the relevant sign changes,
/// reported next to their quoted values.
struct ThresholdReport {
    double quoted = 0.0;
    double recomputed = 0.0;
};

ThresholdReport threshold_gzz_positive();    // t above which G_zz(1/t^2, t) > 0
ThresholdReport threshold_g_negative();      // t above which G(1/t^2, t) < 0
ThresholdReport threshold_beta2_exclusion(); // beta^2 below which fronts are excluded

}  // namespace bouss
