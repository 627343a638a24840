#include "bouss/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace bouss {

namespace {

// beta^2 u'' = u (1 + eta),  beta^2 eta'' = eta + u^2/2
ShootingState rhs(const ShootingState& s, double inv_b2) {
    ShootingState d;
    d.u = s.du;
    d.du = s.u * (1.0 + s.eta) * inv_b2;
    d.eta = s.deta;
    d.deta = (s.eta + 0.5 * s.u * s.u) * inv_b2;
    return d;
}

ShootingState axpy(const ShootingState& a, double c, const ShootingState& b) {
    return {a.u + c * b.u, a.du + c * b.du, a.eta + c * b.eta, a.deta + c * b.deta};
}

double state_norm(const ShootingState& s) {
    return std::max({std::abs(s.u), std::abs(s.du), std::abs(s.eta), std::abs(s.deta)});
}

}  // namespace

WaveProfile ShootingTrajectory::to_profile(double beta) const {
    WaveProfile p;
    int n = static_cast<int>(states.size());
    p.grid = Grid(x.back(), n, Symmetry::EvenHalfLine);
    p.lambda = 0.0;
    p.params = SlowFamily(beta).params();
    p.u.resize(n);
    p.eta.resize(n);
    for (int j = 0; j < n; ++j) {
        p.u[j] = states[j].u;
        p.eta[j] = states[j].eta;
    }
    return p;
}

ShootingTrajectory shoot_stationary(double beta, double u0, double eta0, double x_max,
                                    double step) {
    if (!(beta > 0.0)) throw std::invalid_argument("shoot_stationary: beta must be positive");
    const double inv_b2 = 1.0 / (beta * beta);
    ShootingTrajectory traj;
    traj.step = step;
    ShootingState s{u0, 0.0, eta0, 0.0};
    int nsteps = static_cast<int>(std::llround(x_max / step));
    traj.x.reserve(nsteps + 1);
    traj.states.reserve(nsteps + 1);
    traj.x.push_back(0.0);
    traj.states.push_back(s);
    for (int i = 1; i <= nsteps; ++i) {
        ShootingState k1 = rhs(s, inv_b2);
        ShootingState k2 = rhs(axpy(s, 0.5 * step, k1), inv_b2);
        ShootingState k3 = rhs(axpy(s, 0.5 * step, k2), inv_b2);
        ShootingState k4 = rhs(axpy(s, step, k3), inv_b2);
        s.u += step / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        s.du += step / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        s.eta += step / 6.0 * (k1.eta + 2.0 * k2.eta + 2.0 * k3.eta + k4.eta);
        s.deta += step / 6.0 * (k1.deta + 2.0 * k2.deta + 2.0 * k3.deta + k4.deta);
        traj.x.push_back(i * step);
        traj.states.push_back(s);
        if (state_norm(s) > 1e6) {
            traj.blew_up = true;
            break;
        }
    }
    const ShootingState& e = traj.states.back();
    traj.tail_norm = std::hypot(e.u, e.eta);
    return traj;
}

ShootingResult shoot_stationary_tuned(double beta, Sign branch, double x_max, double step) {
    const double r2 = std::sqrt(2.0);
    const double sgn = branch == Sign::Plus ? 1.0 : -1.0;
    // classify a shot by where the unstable direction sends u
    auto overshoots = [&](double eta0) {
        ShootingTrajectory t = shoot_stationary(beta, -sgn * r2 * eta0, eta0, x_max, step);
        for (const auto& st : t.states) {
            if (sgn * st.u > 3.0) return true;    // beyond the homoclinic crest scale
            if (sgn * st.u < -0.5) return false;  // fell through zero
        }
        return sgn * t.states.back().u > 0.0;
    };
    double lo = -1.7, hi = -1.3;  // brackets the exact crest eta0 = -1.5
    bool olo = overshoots(lo), ohi = overshoots(hi);
    if (olo == ohi) throw std::runtime_error("shoot_stationary_tuned: bracket failure");
    int iters = 0;
    while (hi - lo > 1e-14 && iters < 100) {
        double mid = 0.5 * (lo + hi);
        if (overshoots(mid) == olo)
            lo = mid;
        else
            hi = mid;
        ++iters;
    }
    ShootingResult res;
    res.eta0 = 0.5 * (lo + hi);
    res.u0 = -sgn * r2 * res.eta0;
    res.bisection_iters = iters;
    res.trajectory = shoot_stationary(beta, res.u0, res.eta0, x_max, step);
    return res;
}

double cross_validate(const WaveProfile& main, const WaveProfile& oracle) {
    if (main.grid.symmetry != oracle.grid.symmetry)
        throw std::invalid_argument("cross_validate: incompatible domains");
    double overlap = std::min(main.grid.point(main.grid.n - 1),
                              oracle.grid.point(oracle.grid.n - 1));
    double diff = 0.0;
    if (main.grid == oracle.grid) {
        for (int j = 0; j < main.grid.n; ++j)
            diff = std::max({diff, std::abs(main.u[j] - oracle.u[j]),
                             std::abs(main.eta[j] - oracle.eta[j])});
        return diff;
    }
    for (int j = 0; j < main.grid.n; ++j) {
        double x = main.grid.point(j);
        if (x > overlap) break;
        double uo = interpolate(oracle.u, oracle.grid, x);
        double eo = interpolate(oracle.eta, oracle.grid, x);
        diff = std::max({diff, std::abs(main.u[j] - uo), std::abs(main.eta[j] - eo)});
    }
    return diff;
}

double shooting_first_integral(const ShootingState& s, double beta) {
    double b2 = beta * beta;
    return b2 * s.du * s.du + b2 * s.deta * s.deta - s.u * s.u * (1.0 + s.eta) -
           s.eta * s.eta;
}

}  // namespace bouss
