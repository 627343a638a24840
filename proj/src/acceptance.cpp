#include "bouss/acceptance.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "bouss/analysis.hpp"
#include "bouss/continuation.hpp"
#include "bouss/oracle.hpp"
#include "bouss/solver.hpp"

namespace bouss::acceptance {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

CriterionResult stationary_reproduction() {
    CriterionResult r{"closed-form stationary reproduction", false, ""};
    Grid grid(30.0, 2048);
    WaveProfile plus = stationary_exact(1.0, Sign::Plus, grid);
    WaveProfile minus = stationary_exact(1.0, Sign::Minus, grid);
    double res = abcd_residual(plus, 4).sup();
    double fi = sup_norm(stationary_first_integral(plus, 1.0, 4));
    double wsup = appendix_identities(plus, Sign::Plus).combo_sup;
    double hsup = appendix_identities(minus, Sign::Minus).combo_sup;
    r.pass = res < 1e-8 && fi < 1e-7 && wsup < 1e-12 && hsup < 1e-12;
    r.detail = "abcd residual " + fmt(res) + " (<1e-8), first integral " + fmt(fi) +
               " (<1e-7), |w| " + fmt(wsup) + ", |h| " + fmt(hsup) + " (<1e-12)";
    return r;
}

CriterionResult kernel_and_spectrum() {
    CriterionResult r{"kernel/translation mode and even-subspace spectrum", false, ""};
    SlowFamily fam(1.0);
    Grid half(30.0, 2048);
    WaveProfile full = mirror_to_full_line(stationary_exact(1.0, Sign::Plus, half));
    BlockJacobian J = jacobian_slow(full.u, full.eta, 0.0, fam, full.grid, 4);
    double kr = kernel_mode_residual(full, J, 4);

    double sigma[3] = {0.0, 0.0, 0.0};
    int sizes[3] = {512, 1024, 2048};
    for (int i = 0; i < 3; ++i) {
        Grid g(30.0, sizes[i]);
        WaveProfile p = stationary_exact(1.0, Sign::Plus, g);
        BlockJacobian Jh = jacobian_slow(p.u, p.eta, 0.0, fam, g, 2);
        sigma[i] = smallest_singular_value(Jh);
    }
    bool positive = sigma[0] > 0.05 && sigma[1] > 0.05 && sigma[2] > 0.05;
    bool converging = std::abs(sigma[2] - sigma[1]) <= std::abs(sigma[1] - sigma[0]) + 1e-12;
    r.pass = kr < 1e-6 && positive && converging;
    r.detail = "kernel residual " + fmt(kr) + " (<1e-6); sigma_min " + fmt(sigma[0]) + ", " +
               fmt(sigma[1]) + ", " + fmt(sigma[2]) + " at n=512,1024,2048";
    return r;
}

CriterionResult newton_order() {
    CriterionResult r{"newton convergence order", false, ""};
    Grid grid(30.0, 2048);
    WaveProfile init = stationary_exact(1.0, Sign::Plus, grid);
    for (int j = 0; j < grid.n; ++j) {
        double bump = 1e-3 / std::cosh(grid.point(j));
        init.u[j] += bump;
        init.eta[j] += bump;
    }
    NewtonSettings st;
    st.damping = false;  // plain Newton for the order measurement
    // evaluation roundoff floors the sup residual near 5e-12 on this grid;
    // run past it so a third iteration is recorded
    st.residual_tol = 1e-12;
    st.max_iters = 4;
    st.want_report = false;
    NewtonResult nr = newton_solve(init, SlowFamily(1.0), 0.0, st);
    const auto& h = nr.residual_history;
    bool pass = h.size() >= 4 && h.back() < 1e-10 &&
                *std::min_element(h.begin(), h.end()) < 1e-11;
    std::string seq;
    for (size_t k = 0; k + 1 < h.size() && k < 3; ++k) {
        double bound = std::max(100.0 * std::pow(h[k], 1.8), 1e-11);
        if (h[k + 1] > bound) pass = false;
    }
    for (double v : h) seq += fmt(v) + " ";
    r.pass = pass;
    r.detail = "residuals: " + seq + "(r_{k+1} <= 100 r_k^1.8 over 3 iterations)";
    return r;
}

CriterionResult slow_branch() {
    CriterionResult r{"slow branch beta^2 = 0.25", false, ""};
    Grid grid(40.0, 4096);
    StepSettings st;
    Branch b = continue_slow(0.5, 0.7, st, &grid);
    double furthest = b.points.empty() ? 0.0 : b.points.back().param;
    bool nodal_ok = true, gap_ok = true;
    for (const auto& bp : b.points) {
        if (!bp.diagnostics.nodal.all()) nodal_ok = false;
        if (!(bp.diagnostics.ellipticity_gap > 0.0)) gap_ok = false;
    }
    bool reason_ok = b.reason != TerminationReason::Blowup;
    double lam_star = SlowFamily(0.5).lambda_star();
    r.pass = furthest >= 0.3 && nodal_ok && gap_ok && reason_ok;
    r.detail = "furthest lambda " + fmt(furthest) + " (theoretical limit " + fmt(lam_star) +
               "), " + std::to_string(b.points.size()) + " points, nodal " +
               (nodal_ok ? "ok" : "VIOLATED") + ", gaps " + (gap_ok ? "positive" : "VIOLATED") +
               ", termination " + to_string(b.reason);
    return r;
}

CriterionResult fast_base_wave() {
    CriterionResult r{"fast base wave first integral and crest bounds", false, ""};
    bool pass = true;
    std::string detail;
    for (double lambda : {1.1, 1.5, 2.0}) {
        // the first-integral check differentiates the profile at 4th order;
        // n = 8192 keeps the stencil truncation well under the 1e-6 bound
        Grid grid = default_fast_grid(lambda, 8192);
        WaveProfile p = boussinesq_fast_profile(lambda, grid);
        double lb = fast_crest_lower_bound(lambda);
        bool bounds = p.u[0] > lb + 1e-8 && p.u[0] < lambda - 1e-8;
        auto d1 = first_derivative(grid, grid.natural_closure(), 4);
        Field up = d1.apply(p.u);
        double ode = 0.0, rel = 0.0;
        for (int j = 0; j < grid.n; ++j) {
            ode = std::max(ode, std::abs(lambda * up[j] * up[j] -
                                         fast_wave_phi(p.u[j], lambda)));
            rel = std::max(rel, std::abs(p.eta[j] - p.u[j] / (lambda - p.u[j])));
        }
        if (!(bounds && ode < 1e-6 && rel < 1e-12)) pass = false;
        detail += "lambda=" + fmt(lambda) + ": u0=" + fmt(p.u[0]) + " in (" + fmt(lb) + "," +
                  fmt(lambda) + "), ode " + fmt(ode) + ", eta-relation " + fmt(rel) + "; ";
    }
    r.pass = pass;
    r.detail = detail;
    return r;
}

CriterionResult fast_branch() {
    CriterionResult r{"fast branch lambda=1.5 k=0.5", false, ""};
    StepSettings st;
    Branch b = continue_fast(1.5, 0.5, 0.2, st);
    double s_star = FastFamily::s_star(1.5, 0.5);
    bool nodal_ok = true, bound_ok = true, range_ok = true;
    for (const auto& bp : b.points) {
        if (!bp.diagnostics.nodal.all()) nodal_ok = false;
        if (std::isfinite(bp.diagnostics.eta_bound_slack) &&
            bp.diagnostics.eta_bound_slack < -1e-8)
            bound_ok = false;
        if (bp.param >= s_star) range_ok = false;
    }
    bool reason_ok = b.reason == TerminationReason::LossOfEllipticity ||
                     b.reason == TerminationReason::StagnationLimit ||
                     b.reason == TerminationReason::ParameterRangeExhausted ||
                     b.reason == TerminationReason::NewtonFailureAfterRefinement;
    r.pass = b.points.size() >= 10 && nodal_ok && bound_ok && range_ok && reason_ok;
    r.detail = std::to_string(b.points.size()) + " points up to s=" +
               fmt(b.points.empty() ? 0.0 : b.points.back().param) + " (s* " + fmt(s_star) +
               "), nodal " + (nodal_ok ? "ok" : "VIOLATED") + ", eta bound " +
               (bound_ok ? "ok" : "VIOLATED") + ", termination " + to_string(b.reason);
    return r;
}

CriterionResult front_algebra() {
    CriterionResult r{"front nonexistence algebra", false, ""};
    bool g0 = g_polynomial(0.0, 7.0 / 3.0) == -9.0;
    FrontScanReport scan = slow_front_excluded(0.5, 10000);
    bool obstruction_ok = true;
    double worst = -1e300;
    for (int i = 1; i <= 100; ++i) {
        double lambda = 1.0 + 9.0 * i / 100.0;
        double v = fast_front_obstruction(lambda);
        worst = std::max(worst, v);
        if (!(v < 0.0)) obstruction_ok = false;
    }
    double near_one = fast_front_obstruction(1.0 + 1e-6);
    bool limit_ok = std::abs(near_one) < 1e-4;
    r.pass = g0 && scan.excluded && obstruction_ok && limit_ok;
    r.detail = "G(0,7/3) = -9 exact; scan max G " + fmt(scan.max_g) +
               " (<0); fast obstruction max over (1,10] " + fmt(worst) +
               " (<0); value at 1+1e-6 " + fmt(near_one);
    return r;
}

CriterionResult oracle_equivalence() {
    CriterionResult r{"oracle equivalence", false, ""};
    // stationary: shooting vs Newton
    ShootingResult shot = shoot_stationary_tuned(1.0, Sign::Plus, 20.0);
    WaveProfile oracle = shot.trajectory.to_profile(1.0);
    Grid grid(30.0, 8192);
    NewtonSettings st;
    st.want_report = false;
    st.residual_tol = 1e-9;  // above the evaluation roundoff floor of this grid
    NewtonResult nr = newton_solve(stationary_exact(1.0, Sign::Plus, grid), SlowFamily(1.0),
                                   0.0, st);
    double diff_slow = 0.0;
    for (int j = 0; j < grid.n && grid.point(j) <= 15.0; ++j) {
        diff_slow = std::max({diff_slow,
                              std::abs(nr.profile.u[j] - interpolate(oracle.u, oracle.grid,
                                                                     grid.point(j))),
                              std::abs(nr.profile.eta[j] - interpolate(oracle.eta, oracle.grid,
                                                                       grid.point(j)))});
    }
    // fast base: quadrature vs s = 0 Newton solve
    Grid fgrid(30.0, 8192);
    WaveProfile quad = boussinesq_fast_profile(1.5, fgrid);
    NewtonResult nf = newton_solve(quad, FastFamily(0.5, 0.0, 1.5), st);
    double diff_fast = cross_validate(nf.profile, quad);
    r.pass = nr.status == NewtonStatus::Converged && nf.status == NewtonStatus::Converged &&
             diff_slow < 1e-5 && diff_fast < 1e-5;
    r.detail = "shooting vs newton " + fmt(diff_slow) + " on [0,15]; quadrature vs newton " +
               fmt(diff_fast) + " (both <1e-5)";
    return r;
}

CriterionResult discretization_convergence() {
    CriterionResult r{"discretization second-order convergence", false, ""};
    double res[3];
    int sizes[3] = {2048, 4096, 8192};
    for (int i = 0; i < 3; ++i) {
        Grid g(30.0, sizes[i]);
        res[i] = abcd_residual(stationary_exact(1.0, Sign::Plus, g), 2).sup();
    }
    double f1 = res[0] / res[1], f2 = res[1] / res[2];
    r.pass = f1 > 3.5 && f1 < 4.5 && f2 > 3.5 && f2 < 4.5;
    r.detail = "residuals " + fmt(res[0]) + " / " + fmt(res[1]) + " / " + fmt(res[2]) +
               ", reduction factors " + fmt(f1) + ", " + fmt(f2) + " (in [3.5, 4.5])";
    return r;
}

}  // namespace

std::vector<CriterionResult> run_all(std::ostream* progress) {
    std::vector<CriterionResult> out;
    auto push = [&](CriterionResult c) {
        if (progress)
            *progress << (c.pass ? "PASS" : "FAIL") << "  criterion " << out.size() + 1 << ": "
                      << c.name << " :: " << c.detail << "\n";
        out.push_back(std::move(c));
    };
    push(stationary_reproduction());
    push(kernel_and_spectrum());
    push(newton_order());
    push(slow_branch());
    push(fast_base_wave());
    push(fast_branch());
    push(front_algebra());
    push(oracle_equivalence());
    push(discretization_convergence());
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace bouss::acceptance
