#include "bouss/model.hpp"

#include <algorithm>
#include <cmath>

namespace bouss {

namespace {

bool all_finite(const Field& f) {
    for (double v : f)
        if (!std::isfinite(v)) return false;
    return true;
}

void check_fields(const WaveProfile& p) {
    if (static_cast<int>(p.u.size()) != p.grid.n || static_cast<int>(p.eta.size()) != p.grid.n)
        throw std::invalid_argument("WaveProfile: field length != grid point count");
    if (!all_finite(p.u) || !all_finite(p.eta) || !std::isfinite(p.lambda))
        throw std::invalid_argument("WaveProfile: non-finite entries");
}

}  // namespace

void ABCDParams::validate() const {
    if (std::abs(sum_defect()) > 1e-12)
        throw std::invalid_argument("ABCDParams: a+b+c+d != 1/3 - tau");
}

SlowFamily::SlowFamily(double beta_) : beta(beta_) {
    if (!(beta > 0.0)) throw std::invalid_argument("SlowFamily: beta must be positive");
}

ABCDParams SlowFamily::params() const {
    double b2 = beta * beta;
    ABCDParams p{-b2, 1.0 / 3.0 + b2, -b2, b2, 0.0};
    p.validate();
    return p;
}

FastFamily::FastFamily(double k_, double s_, double lambda_) : k(k_), s(s_), lambda(lambda_) {
    if (!(k > 0.0 && k < lambda)) throw std::invalid_argument("FastFamily: need 0 < k < lambda");
    if (s < 0.0) throw std::invalid_argument("FastFamily: s must be nonnegative");
    if (!(gamma1_gap() > 0.0)) throw std::invalid_argument("FastFamily: outside Gamma_1");
}

ABCDParams FastFamily::params() const {
    ABCDParams p{k * s, s, k * s, 1.0 / 3.0 - (2.0 * k + 1.0) * s, 0.0};
    p.validate();
    return p;
}

void WaveProfile::validate() const { check_fields(*this); }

double WaveProfile::tail_sup() const {
    int start = static_cast<int>(std::floor(0.9 * (grid.n - 1)));
    double m = 0.0;
    for (int j = start; j < grid.n; ++j)
        m = std::max({m, std::abs(u[j]), std::abs(eta[j])});
    return m;
}

ResidualPair abcd_residual(const WaveProfile& p, int order) {
    check_fields(p);
    const auto d2 = second_derivative(p.grid, p.grid.natural_closure(), order);
    Field upp = d2.apply(p.u), epp = d2.apply(p.eta);
    const double a = p.params.a, b = p.params.b, c = p.params.c, d = p.params.d;
    const double lam = p.lambda;
    ResidualPair r;
    r.first.resize(p.grid.n);
    r.second.resize(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) {
        double u = p.u[j], e = p.eta[j];
        r.first[j] = c * epp[j] + e - lam * u + d * lam * upp[j] + 0.5 * u * u;
        r.second[j] = a * upp[j] + u - lam * e + b * lam * epp[j] + e * u;
    }
    return r;
}

WaveProfile stationary_exact(double beta, Sign branch, const Grid& grid) {
    SlowFamily fam(beta);
    WaveProfile p;
    p.grid = grid;
    p.lambda = 0.0;
    p.params = fam.params();
    p.u.resize(grid.n);
    p.eta.resize(grid.n);
    const double amp = 1.5 * std::sqrt(2.0) * (branch == Sign::Plus ? 1.0 : -1.0);
    for (int j = 0; j < grid.n; ++j) {
        double sech = 1.0 / std::cosh(grid.point(j) / (2.0 * beta));
        double s2 = sech * sech;
        p.u[j] = amp * s2;
        p.eta[j] = -1.5 * s2;
    }
    return p;
}

Field stationary_first_integral(const WaveProfile& p, double beta, int order) {
    check_fields(p);
    const auto d1 = first_derivative(p.grid, p.grid.natural_closure(), order);
    Field up = d1.apply(p.u), ep = d1.apply(p.eta);
    Field r(p.grid.n);
    const double b2 = beta * beta;
    for (int j = 0; j < p.grid.n; ++j) {
        double u = p.u[j], e = p.eta[j];
        r[j] = b2 * up[j] * up[j] + b2 * ep[j] * ep[j] - u * u * (1.0 + e) - e * e;
    }
    return r;
}

ResidualPair slow_residual(const Field& u, const Field& eta, double lambda,
                           const SlowFamily& fam, const Grid& grid, int order) {
    if (static_cast<int>(u.size()) != grid.n || static_cast<int>(eta.size()) != grid.n)
        throw std::invalid_argument("slow_residual: size mismatch");
    const auto d2 = second_derivative(grid, grid.natural_closure(), order);
    Field upp = d2.apply(u), epp = d2.apply(eta);
    const double b2 = fam.beta * fam.beta;
    const double t = fam.t();
    ResidualPair r;
    r.first.resize(grid.n);
    r.second.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        // L f = f - beta^2 f''
        double Lu = u[j] - b2 * upp[j];
        double Le = eta[j] - b2 * epp[j];
        r.first[j] = Lu - lambda * t * Le + (lambda / (3.0 * b2) + u[j]) * eta[j];
        r.second[j] = Le - lambda * Lu + 0.5 * u[j] * u[j];
    }
    return r;
}

ResidualPair fast_residual(const Field& u, const Field& eta, const FastFamily& fam,
                           const Grid& grid, int order) {
    if (static_cast<int>(u.size()) != grid.n || static_cast<int>(eta.size()) != grid.n)
        throw std::invalid_argument("fast_residual: size mismatch");
    const auto d2 = second_derivative(grid, grid.natural_closure(), order);
    Field upp = d2.apply(u), epp = d2.apply(eta);
    const double k = fam.k, s = fam.s, lam = fam.lambda, bb = fam.b_bar();
    ResidualPair r;
    r.first.resize(grid.n);
    r.second.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
        r.first[j] = k * s * upp[j] + lam * s * epp[j] + u[j] - lam * eta[j] + eta[j] * u[j];
        r.second[j] = bb * lam * upp[j] + k * s * epp[j] - lam * u[j] + eta[j] + 0.5 * u[j] * u[j];
    }
    return r;
}

double fast_wave_phi(double u, double lambda) {
    if (u >= lambda) throw std::domain_error("fast_wave_phi: u >= lambda (stagnation)");
    double q = u / lambda;
    if (std::abs(q) < 1e-4) {
        // 6u + 6 lambda log1p(-u/lambda) cancels to O(u^2); use the series
        double c2 = 3.0 * (lambda - 1.0 / lambda);
        double c3 = -(1.0 + 2.0 / (lambda * lambda));
        double c4 = -1.5 / (lambda * lambda * lambda);
        double c5 = -1.2 / (lambda * lambda * lambda * lambda);
        double c6 = -1.0 / (lambda * lambda * lambda * lambda * lambda);
        return u * u * (c2 + u * (c3 + u * (c4 + u * (c5 + u * c6))));
    }
    return -u * u * u + 3.0 * lambda * u * u + 6.0 * u + 6.0 * lambda * std::log1p(-q);
}

double fast_wave_phi_prime(double u, double lambda) {
    return -3.0 * u * u + 6.0 * lambda * u + 6.0 - 6.0 * lambda / (lambda - u);
}

double fast_crest_lower_bound(double lambda) {
    return 0.5 * (3.0 * lambda - std::sqrt(lambda * lambda + 8.0));
}

double fast_crest(double lambda) {
    if (!(lambda > 1.0)) throw std::domain_error("fast_crest: requires lambda > 1");
    double lo = fast_crest_lower_bound(lambda);
    double hi = lambda * (1.0 - 1e-12);
    if (!(fast_wave_phi(lo, lambda) > 0.0) || !(fast_wave_phi(hi, lambda) < 0.0))
        throw std::domain_error("fast_crest: root bracketing failure");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (fast_wave_phi(mid, lambda) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * lambda) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

// u(x) = u* + a2 x^2 + a4 x^4 + a6 x^6 near the crest, where Phi has a
// simple root and sqrt(Phi) is not directly integrable.
double crest_series(double x, double ustar, double lambda) {
    double p1 = fast_wave_phi_prime(ustar, lambda);
    double lm = lambda - ustar;
    double p2 = -6.0 * ustar + 6.0 * lambda - 6.0 * lambda / (lm * lm);
    double p3 = -6.0 - 12.0 * lambda / (lm * lm * lm);
    double a2 = p1 / (4.0 * lambda);
    double a4 = p2 * p1 / (96.0 * lambda * lambda);
    double a6 = (p2 * a4 + 0.5 * p3 * a2 * a2) / (60.0 * lambda);
    double x2 = x * x;
    return ustar + x2 * (a2 + x2 * (a4 + x2 * a6));
}

double fast_slope(double u, double lambda) {
    double phi = fast_wave_phi(u, lambda);
    return -std::sqrt(std::max(phi, 0.0) / lambda);
}

}  // namespace

WaveProfile boussinesq_fast_profile(double lambda, const Grid& grid) {
    if (grid.symmetry != Symmetry::EvenHalfLine)
        throw std::invalid_argument("boussinesq_fast_profile: even-half-line grid required");
    const double ustar = fast_crest(lambda);

    WaveProfile p;
    p.grid = grid;
    p.lambda = lambda;
    p.params = ABCDParams{0.0, 0.0, 0.0, 1.0 / 3.0, 0.0};
    p.u.assign(grid.n, 0.0);
    p.eta.assign(grid.n, 0.0);

    const double h = grid.spacing();
    const double x_series = std::min(h, 0.02);
    p.u[0] = ustar;

    double x = x_series;
    double u = crest_series(x, ustar, lambda);
    int j = 1;
    while (j < grid.n && grid.point(j) <= x_series + 1e-300) {
        p.u[j] = crest_series(grid.point(j), ustar, lambda);
        ++j;
    }
    // adaptive RK4 (step doubling) from node to node
    const double tol = 1e-13;
    for (; j < grid.n; ++j) {
        double target = grid.point(j);
        double dx = target - x;
        while (x < target - 1e-14) {
            dx = std::min(dx, target - x);
            auto rk4 = [&](double x0, double u0, double step) {
                (void)x0;  // autonomous
                double k1 = fast_slope(u0, lambda);
                double k2 = fast_slope(u0 + 0.5 * step * k1, lambda);
                double k3 = fast_slope(u0 + 0.5 * step * k2, lambda);
                double k4 = fast_slope(u0 + step * k3, lambda);
                return u0 + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            };
            double u_full = rk4(x, u, dx);
            double u_half = rk4(x + 0.5 * dx, rk4(x, u, 0.5 * dx), 0.5 * dx);
            double err = std::abs(u_full - u_half) / 15.0;
            if (err > tol * std::max(1.0, std::abs(u)) && dx > 1e-8) {
                dx *= 0.5;
                continue;
            }
            u = u_half + (u_half - u_full) / 15.0;
            x += dx;
            if (u < 0.0) u = 0.0;
            if (u >= lambda)
                throw std::domain_error("boussinesq_fast_profile: integration left (0, lambda)");
            if (err < 0.25 * tol) dx *= 2.0;
        }
        p.u[j] = u;
    }
    for (int i = 0; i < grid.n; ++i) p.eta[i] = p.u[i] / (lambda - p.u[i]);
    return p;
}

double hamiltonian(const WaveProfile& p, int order) {
    check_fields(p);
    const auto d1 = first_derivative(p.grid, p.grid.natural_closure(), order);
    Field up = d1.apply(p.u), ep = d1.apply(p.eta);
    Field f(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) {
        double u = p.u[j], e = p.eta[j];
        f[j] = 0.5 * (-p.params.c * ep[j] * ep[j] - p.params.a * up[j] * up[j] + e * e +
                      (1.0 + e) * u * u);
    }
    return integrate(f, p.grid);
}

double impulse(const WaveProfile& p, double b, int order) {
    check_fields(p);
    const auto d1 = first_derivative(p.grid, p.grid.natural_closure(), order);
    Field up = d1.apply(p.u), ep = d1.apply(p.eta);
    Field f(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j)
        f[j] = p.eta[j] * p.u[j] + b * ep[j] * up[j];
    return integrate(f, p.grid);
}

Field flux_identity_residual(const WaveProfile& p, const SlowFamily& fam, int order) {
    check_fields(p);
    const auto d1 = first_derivative(p.grid, p.grid.natural_closure(), order);
    Field up = d1.apply(p.u), ep = d1.apply(p.eta);
    const double b2 = fam.beta * fam.beta, t = fam.t(), lam = p.lambda;
    const double B = fam.ellipticity_gap(lam);
    Field bracket(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) {
        double u = p.u[j], e = p.eta[j];
        bracket[j] = -0.5 * b2 * B * (up[j] * up[j] + ep[j] * ep[j]) +
                     0.5 * (1.0 - lam * lam) * e * e + 0.5 * B * u * u +
                     lam * t / 6.0 * u * u * u + 0.5 * u * u * e;
    }
    Field dbr = d1.apply(bracket);
    Field r(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j)
        r[j] = dbr[j] + lam * p.u[j] * p.eta[j] * ep[j] +
               lam / (3.0 * b2) * p.eta[j] * up[j];
    return r;
}

Field flux_identity_residual(const WaveProfile& p, const FastFamily& fam, int order) {
    check_fields(p);
    const auto d1 = first_derivative(p.grid, p.grid.natural_closure(), order);
    Field up = d1.apply(p.u), ep = d1.apply(p.eta);
    const double k = fam.k, s = fam.s, lam = fam.lambda, bb = fam.b_bar();
    Field bracket(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j) {
        double u = p.u[j], e = p.eta[j];
        bracket[j] = 0.5 * bb * lam * up[j] * up[j] + 0.5 * lam * s * ep[j] * ep[j] +
                     k * s * up[j] * ep[j] + u * e - 0.5 * lam * u * u -
                     0.5 * lam * e * e + u * u * u / 6.0;
    }
    Field dbr = d1.apply(bracket);
    Field r(p.grid.n);
    for (int j = 0; j < p.grid.n; ++j)
        r[j] = dbr[j] + p.u[j] * p.eta[j] * ep[j];
    return r;
}

}  // namespace bouss
