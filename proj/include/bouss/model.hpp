/**
 * @file model.hpp
 * @brief The abcd traveling-wave equations, the two parameter families,
 *        closed-form base solutions, first integrals, and diagnostic
 *        functionals.
 *
 * Two one-parameter families are traced:
 *   - slow family: a = c = -beta^2, d = beta^2, b = 1/3 + beta^2, continued
 *     in the wave speed lambda starting from the stationary sech^2 pair;
 *   - fast family: a = c = k*s, b = s, d = 1/3 - (2k+1)s at fixed speed
 *     lambda > 1, continued in s starting from the classical Boussinesq
 *     supercritical wave.
 *
 * All operations are pure; profiles are immutable value types.
 */

#pragma once

#include <cmath>

#include "bouss/discretize.hpp"

namespace bouss {

/// The four model coefficients. Both families satisfy a+b+c+d = 1/3 - tau
/// with tau = 0.
struct ABCDParams {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double tau = 0.0;

    double sum_defect() const { return a + b + c + d - (1.0 / 3.0 - tau); }
    void validate() const;
};

enum class Sign { Plus, Minus };

struct SlowFamily {
    double beta;

    explicit SlowFamily(double beta_);
    double t() const { return 1.0 + 1.0 / (3.0 * beta * beta); }
    /// Leading-coefficient gap of the reduced equations, 1 - lambda^2 * t.
    double ellipticity_gap(double lambda) const { return 1.0 - lambda * lambda * t(); }
    double lambda_star() const { return 1.0 / std::sqrt(t()); }
    ABCDParams params() const;
};

struct FastFamily {
    double k;
    double s;
    double lambda;

    FastFamily(double k_, double s_, double lambda_);
    double b_bar() const { return 1.0 / 3.0 - (2.0 * k + 1.0) * s; }
    /// Gamma_1 membership gap, lambda^2/3 - ((2k+1)lambda^2 + k^2) s.
    double gamma1_gap() const {
        return lambda * lambda / 3.0 - ((2.0 * k + 1.0) * lambda * lambda + k * k) * s;
    }
    static double s_star(double lambda, double k) {
        return lambda * lambda / (3.0 * ((2.0 * k + 1.0) * lambda * lambda + k * k));
    }
    ABCDParams params() const;
};

/// Sampled (u, eta) pair on a grid together with wave speed and coefficients.
struct WaveProfile {
    Grid grid;
    Field u;
    Field eta;
    double lambda = 0.0;
    ABCDParams params;

    void validate() const;  // sizes and finiteness
    /// sup of |u|, |eta| over the last 10% of the grid
    double tail_sup() const;
};

struct ResidualPair {
    Field first;   ///< first equation of the system evaluated pointwise
    Field second;  ///< second equation
    double sup() const { return std::max(sup_norm(first), sup_norm(second)); }
};

/// Pointwise residuals of the traveling-wave system
///   c eta'' + eta - lambda u + d lambda u'' + u^2/2 = 0
///   a u''  + u - lambda eta + b lambda eta'' + eta u = 0
/// using the grid's discrete second derivative of the given order.
ResidualPair abcd_residual(const WaveProfile& p, int order = 2);

/// Closed-form stationary solitary wave (lambda = 0, slow family):
/// u = +-(3 sqrt2 / 2) sech^2(x / 2 beta), eta = -(3/2) sech^2(x / 2 beta).
WaveProfile stationary_exact(double beta, Sign branch, const Grid& grid);

/// Pointwise residual of the stationary first integral
///   beta^2 (u')^2 + beta^2 (eta')^2 - u^2 (1 + eta) - eta^2.
Field stationary_first_integral(const WaveProfile& p, double beta, int order = 4);

/// Residuals of the slow-family form
///   F1 = L(u - lambda t eta) + (lambda/(3 beta^2) + u) eta
///   F2 = L(eta - lambda u) + u^2/2,        L = 1 - beta^2 d_xx.
/// F1 equals the second abcd equation, F2 the first, under the family map.
ResidualPair slow_residual(const Field& u, const Field& eta, double lambda,
                           const SlowFamily& fam, const Grid& grid, int order = 2);

/// Residuals of the fast-family form
///   F1 = k s u'' + lambda s eta'' + u - lambda eta + eta u
///   F2 = (1/3 - (2k+1)s) lambda u'' + k s eta'' - lambda u + eta + u^2/2.
ResidualPair fast_residual(const Field& u, const Field& eta, const FastFamily& fam,
                           const Grid& grid, int order = 2);

/// First integral of the classical Boussinesq wave:
///   Phi(u) = -u^3 + 3 lambda u^2 + 6u + 6 lambda log((lambda - u)/lambda),
/// with lambda (u')^2 = Phi(u) along the profile. Series evaluation near
/// u = 0 avoids the cancellation between 6u and the log term.
double fast_wave_phi(double u, double lambda);
double fast_wave_phi_prime(double u, double lambda);

/// Lower crest bound (3 lambda - sqrt(lambda^2 + 8))/2; the crest is the
/// root of Phi in (bound, lambda).
double fast_crest_lower_bound(double lambda);

/// Root of Phi in the crest bracket, by bisection.
double fast_crest(double lambda);

/// Classical Boussinesq supercritical wave: integrates du/dx = -sqrt(Phi/lambda)
/// outward from the crest (series start around the simple root of Phi) and
/// sets eta = u/(lambda - u). Throws std::domain_error on bracketing failure
/// (lambda <= 1) or if the integration leaves (0, lambda).
WaveProfile boussinesq_fast_profile(double lambda, const Grid& grid);

/// Diagnostic functionals (trapezoid rule on the truncated domain; no
/// conservation claim when b != d).
double hamiltonian(const WaveProfile& p, int order = 4);
double impulse(const WaveProfile& p, double b, int order = 4);

/// Pointwise flux identity obtained by multiplying the reduced equations by
/// eta' and u' and summing: d/dx[bracket] plus the non-exact remainder terms.
/// Near zero along true solutions of the corresponding system.
Field flux_identity_residual(const WaveProfile& p, const SlowFamily& fam, int order = 4);
Field flux_identity_residual(const WaveProfile& p, const FastFamily& fam, int order = 4);

}  // namespace bouss
