#include "bouss/analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace bouss {

FrontLimit front_limit_slow(double lambda, double beta) {
    SlowFamily fam(beta);
    double B = fam.ellipticity_gap(lambda);
    if (!(B > 0.0)) throw std::domain_error("front_limit_slow: nonpositive ellipticity gap");
    double lam2 = lambda * lambda;
    FrontLimit f;
    f.B = B;
    double disc = lam2 * B * B + 8.0 * B * (2.0 - B) * (1.0 - lam2);
    f.ubar = (std::sqrt(disc) - lambda * B) / (2.0 * (2.0 - B));
    f.etabar = -f.ubar * f.ubar / (2.0 * (1.0 - lam2 - lambda * f.ubar));
    f.quadratic_residual =
        -(2.0 - B) * f.ubar * f.ubar - lambda * B * f.ubar + 2.0 * (1.0 - lam2) * B;
    return f;
}

double g_polynomial(double z, double t) {
    return ((-20.0 + 13.0 / t) * z + (-60.0 + 33.0 / t + 32.0 * t)) * z * z +
           (-39.0 + 18.0 / t + 32.0 * t) * z - 9.0;
}

double g_polynomial_z(double z, double t) {
    return 3.0 * (-20.0 + 13.0 / t) * z * z + 2.0 * (-60.0 + 33.0 / t + 32.0 * t) * z +
           (-39.0 + 18.0 / t + 32.0 * t);
}

double g_polynomial_zz(double z, double t) {
    return 6.0 * (-20.0 + 13.0 / t) * z + 2.0 * (-60.0 + 33.0 / t + 32.0 * t);
}

FrontScanReport slow_front_excluded(double beta, int scan_n) {
    SlowFamily fam(beta);
    FrontScanReport rep;
    rep.t = fam.t();
    rep.scan_n = scan_n;
    double zmax = 1.0 / (rep.t * rep.t);
    rep.max_g = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= scan_n; ++i) {
        // endpoint-exclusive scan of (0, 1/t^2)
        double z = zmax * i / (scan_n + 1);
        double g = g_polynomial(z, rep.t);
        if (g > rep.max_g) {
            rep.max_g = g;
            rep.z_at_max = z;
        }
    }
    rep.excluded = rep.max_g < 0.0;
    return rep;
}

double slow_front_lower_bound(double lambda, double B) {
    double lam2 = lambda * lambda;
    double disc = 4.0 * (1.0 - B) * (1.0 - B) * (1.0 - lam2) * (1.0 - lam2) +
                  3.0 * (7.0 - 4.0 * B) * B * lam2 * (1.0 - lam2);
    return (2.0 * std::sqrt(disc) - 4.0 * (1.0 - B) * (1.0 - lam2)) /
           (lambda * (7.0 - 4.0 * B));
}

double fast_front_obstruction(double lambda) {
    if (!(lambda > 1.0)) throw std::domain_error("fast_front_obstruction: requires lambda > 1");
    double ub = 0.5 * (3.0 * lambda - std::sqrt(lambda * lambda + 8.0));
    double eb = ub / (lambda - ub);
    return ub * eb - 0.5 * lambda * ub * ub - 0.5 * lambda * eb * eb + ub * ub * ub / 6.0 +
           0.5 * ub * eb * eb;
}

double reduced_obstruction_fast(double lambda) {
    double ub = 0.5 * (3.0 * lambda - std::sqrt(lambda * lambda + 8.0));
    return (lambda - ub) * (ub / 3.0 - lambda) + 1.0;
}

AppendixReport appendix_identities(const WaveProfile& p, Sign branch) {
    if (p.lambda != 0.0)
        throw std::invalid_argument("appendix_identities: stationary profile required");
    double a = p.params.a;
    if (!(a < 0.0)) throw std::invalid_argument("appendix_identities: slow-family profile required");
    double beta = std::sqrt(-a);
    const double r2 = std::sqrt(2.0);
    const Grid& g = p.grid;
    Field combo(g.n);
    double sgn = branch == Sign::Plus ? 1.0 : -1.0;
    for (int j = 0; j < g.n; ++j) combo[j] = p.u[j] + sgn * r2 * p.eta[j];

    auto d2 = second_derivative(g, g.natural_closure(), 4);
    auto d1 = first_derivative(g, g.natural_closure(), 4);
    Field cpp = d2.apply(combo), ep = d1.apply(p.eta);

    AppendixReport rep;
    rep.combo_sup = sup_norm(combo);
    double ode = 0.0, kdv = 0.0;
    for (int j = 0; j < g.n; ++j) {
        // beta^2 w'' = (1 + u/sqrt2) w  (plus branch);  h analogous with -.
        double pot = 1.0 + sgn * p.u[j] / r2;
        ode = std::max(ode, std::abs(beta * beta * cpp[j] - pot * combo[j]));
        double e = p.eta[j];
        kdv = std::max(kdv,
                       std::abs(beta * beta * ep[j] * ep[j] - e * e - 2.0 / 3.0 * e * e * e));
    }
    rep.combo_ode_residual = ode;
    rep.kdv_residual = kdv;
    return rep;
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-14 * std::max(1.0, std::abs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

ThresholdReport threshold_gzz_positive() {
    auto f = [](double t) { return g_polynomial_zz(1.0 / (t * t), t); };
    return {1.68, bisect(f, 1.3, 2.2)};
}

ThresholdReport threshold_g_negative() {
    auto f = [](double t) { return g_polynomial(1.0 / (t * t), t); };
    return {2.264, bisect(f, 1.8, 3.0)};
}

ThresholdReport threshold_beta2_exclusion() {
    double t_star = threshold_g_negative().recomputed;
    return {0.26, 1.0 / (3.0 * (t_star - 1.0))};
}

}  // namespace bouss
