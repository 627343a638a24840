#include "bouss/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

namespace bouss {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::LossOfEllipticity: return "loss_of_ellipticity";
        case TerminationReason::StagnationLimit: return "stagnation_limit";
        case TerminationReason::Blowup: return "blowup";
        case TerminationReason::NodalViolation: return "nodal_violation";
        case TerminationReason::NewtonFailureAfterRefinement:
            return "newton_failure_after_refinement";
        case TerminationReason::ParameterRangeExhausted: return "parameter_range_exhausted";
    }
    return "unknown";
}

NodalFlags nodal_check(const WaveProfile& p, NodalPattern pattern, double tol) {
    const int n = p.grid.n;
    const double h = p.grid.spacing();
    NodalFlags f;
    f.u_positive = true;
    f.eta_signed = true;
    f.u_decreasing = true;
    f.eta_monotone = true;
    for (int j = 0; j < n; ++j) {
        if (p.u[j] < -tol) f.u_positive = false;
        if (pattern == NodalPattern::Slow) {
            if (p.eta[j] > tol) f.eta_signed = false;
        } else {
            if (p.eta[j] < -tol) f.eta_signed = false;
        }
    }
    for (int j = 1; j < n - 1; ++j) {
        double du = (p.u[j + 1] - p.u[j - 1]) / (2.0 * h);
        double de = (p.eta[j + 1] - p.eta[j - 1]) / (2.0 * h);
        if (du > tol) f.u_decreasing = false;
        if (pattern == NodalPattern::Slow) {
            if (de < -tol) f.eta_monotone = false;
        } else {
            if (de > tol) f.eta_monotone = false;
        }
    }
    return f;
}

double eta_upper_bound_fast(double u0, double k, double s, double lambda) {
    double bb = 1.0 / 3.0 - (2.0 * k + 1.0) * s;
    double num = bb * lambda + (lambda - 0.5 * u0) * k * s;
    double den = bb * lambda * (lambda - u0) + k * s;
    return num / den * u0;
}

namespace {

double c2_grid_norm(const WaveProfile& p) {
    auto d1 = first_derivative(p.grid, p.grid.natural_closure(), 2);
    auto d2 = second_derivative(p.grid, p.grid.natural_closure(), 2);
    return std::max({sup_norm(p.u), sup_norm(p.eta), sup_norm(d1.apply(p.u)),
                     sup_norm(d1.apply(p.eta)), sup_norm(d2.apply(p.u)),
                     sup_norm(d2.apply(p.eta))});
}

double safe_decay_rate(const WaveProfile& p) {
    try {
        return decay_rate(p.u, p.grid);
    } catch (const std::domain_error&) {
        return kNaN;
    }
}

}  // namespace

DiagnosticsReport make_diagnostics(const WaveProfile& p, const SlowFamily& fam,
                                   double residual_sup, double sigma_min) {
    DiagnosticsReport d;
    d.residual_sup = residual_sup;
    d.nodal = nodal_check(p, NodalPattern::Slow);
    d.ellipticity_gap = fam.ellipticity_gap(p.lambda);
    d.stagnation_gap = kNaN;
    // the base point lambda = 0 sits on the admissible-set boundary; only the
    // gap distance is meaningful there
    double dist = p.lambda > 0.0 ? std::min(d.ellipticity_gap, p.lambda) : d.ellipticity_gap;
    d.blowup_quantity = c2_grid_norm(p) + p.lambda + (dist > 0.0 ? 1.0 / dist : kNaN);
    d.u_crest = p.u[0];
    d.eta_crest = p.eta[0];
    d.decay_rate = safe_decay_rate(p);
    d.eta_bound_slack = kNaN;
    d.sigma_min = sigma_min;
    return d;
}

DiagnosticsReport make_diagnostics(const WaveProfile& p, const FastFamily& fam,
                                   double residual_sup, double sigma_min) {
    DiagnosticsReport d;
    d.residual_sup = residual_sup;
    d.nodal = nodal_check(p, NodalPattern::Fast);
    d.ellipticity_gap = fam.gamma1_gap();
    d.stagnation_gap = fam.lambda - sup_norm(p.u);
    double dist = std::min(d.ellipticity_gap, d.stagnation_gap);
    d.blowup_quantity = c2_grid_norm(p) + fam.lambda + (dist > 0.0 ? 1.0 / dist : kNaN);
    d.u_crest = p.u[0];
    d.eta_crest = p.eta[0];
    d.decay_rate = safe_decay_rate(p);
    d.eta_bound_slack = eta_upper_bound_fast(p.u[0], fam.k, fam.s, fam.lambda) - p.eta[0];
    d.sigma_min = sigma_min;
    return d;
}

TerminationReason classify_termination(const std::vector<BranchPoint>& history,
                                       StopCause cause, FamilyKind kind,
                                       const StepSettings& settings) {
    if (history.empty()) {
        return cause == StopCause::NewtonFailure
                   ? TerminationReason::NewtonFailureAfterRefinement
                   : TerminationReason::ParameterRangeExhausted;
    }
    const DiagnosticsReport& d = history.back().diagnostics;
    if (d.ellipticity_gap < settings.gap_tol) return TerminationReason::LossOfEllipticity;
    if (kind == FamilyKind::Fast && d.stagnation_gap < settings.stag_tol)
        return TerminationReason::StagnationLimit;
    if (std::isfinite(d.blowup_quantity) && d.blowup_quantity > settings.blowup_max)
        return TerminationReason::Blowup;
    if (cause == StopCause::NodalFailure) return TerminationReason::NodalViolation;
    if (cause == StopCause::NewtonFailure)
        return TerminationReason::NewtonFailureAfterRefinement;
    return TerminationReason::ParameterRangeExhausted;
}

Grid default_slow_grid(double beta, int n) {
    return Grid(30.0 * std::max(beta, 1.0), n, Symmetry::EvenHalfLine);
}

Grid default_fast_grid(double lambda, int n) {
    double scale = lambda / std::sqrt(3.0 * (lambda * lambda - 1.0));
    return Grid(30.0 * std::max(1.0, scale), n, Symmetry::EvenHalfLine);
}

namespace {

// Family-specific pieces of the stepping loop.
struct FamilyOps {
    std::function<bool(double)> admissible;  // parameter value inside the region
    std::function<NewtonResult(const WaveProfile&, double)> solve;
    std::function<Field(const WaveProfile&, double)> residual_packed;
    std::function<BlockJacobian(const WaveProfile&, double)> jacobian;
    std::function<Field(const WaveProfile&, double)> dres_dparam_packed;
    std::function<DiagnosticsReport(const WaveProfile&, double, double, double)> diagnostics;
    std::function<bool(const BranchPoint&, std::string&)> accept_extra;
    NodalPattern pattern = NodalPattern::Slow;
    // margin whose shrinkage below tolerance ends the trace naturally
    std::function<double(const DiagnosticsReport&)> stop_margin;
    double stop_margin_tol = 0.0;
};

double weighted_dot(const Field& w, const Field& a, const Field& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
    return s;
}

struct PalResult {
    WaveProfile profile;
    double param = 0.0;
    double residual_sup = 0.0;
    bool ok = false;
};

PalResult pseudo_arclength_solve(const FamilyOps& ops, const StepSettings& settings,
                                 const BranchPoint& last, const Field& tau_v, double tau_p,
                                 double ds) {
    const Grid& grid = last.profile.grid;
    Packing pk = Packing::of(grid);
    Field w = packed_weights(grid, pk);
    Field v0 = pack_fields(last.profile.u, last.profile.eta, pk);

    PalResult out;
    out.profile = last.profile;
    Field v = v0;
    for (size_t i = 0; i < v.size(); ++i) v[i] += ds * tau_v[i];
    double p = last.param + ds * tau_p;

    for (int it = 0; it < settings.newton.max_iters; ++it) {
        if (!std::isfinite(p) || !ops.admissible(p)) return out;
        unpack_fields(v, pk, grid.n, out.profile.u, out.profile.eta);
        Field R = ops.residual_packed(out.profile, p);
        Field dv(v.size());
        for (size_t i = 0; i < v.size(); ++i) dv[i] = v[i] - v0[i];
        double N = weighted_dot(w, tau_v, dv) + tau_p * (p - last.param) - ds;
        double rsup = sup_norm(R);
        if (!std::isfinite(rsup)) return out;
        if (rsup < settings.newton.residual_tol && std::abs(N) < settings.newton.residual_tol) {
            out.param = p;
            out.residual_sup = rsup;
            out.ok = true;
            return out;
        }
        BlockJacobian J = ops.jacobian(out.profile, p);
        BandedLU lu(J.assemble(pk));
        if (!lu.ok()) return out;
        Field Fp = ops.dres_dparam_packed(out.profile, p);
        Field x1 = lu.solve(R);
        Field x2 = lu.solve(Fp);
        double denom = tau_p - weighted_dot(w, tau_v, x2);
        if (std::abs(denom) < 1e-14) return out;
        double dp = (weighted_dot(w, tau_v, x1) - N) / denom;
        for (size_t i = 0; i < v.size(); ++i) v[i] += -x1[i] - dp * x2[i];
        p += dp;
    }
    return out;
}

Branch trace_branch(const FamilyOps& ops, Branch branch, WaveProfile start, double p_start,
                    double p_max, StepSettings settings, double default_step,
                    double default_max_step) {
    if (settings.initial_step <= 0.0) settings.initial_step = default_step;
    if (settings.max_step <= 0.0) settings.max_step = default_max_step;
    const double step_floor = settings.min_step_fraction * settings.initial_step;

    StopCause cause = StopCause::RangeExhausted;
    std::string detail;

    NewtonResult r0 = ops.solve(start, p_start);
    if (r0.status != NewtonStatus::Converged) {
        branch.reason = classify_termination({}, StopCause::NewtonFailure, branch.kind, settings);
        branch.detail = "initial solve failed";
        return branch;
    }
    {
        BranchPoint bp{r0.profile, p_start,
                       ops.diagnostics(r0.profile, p_start, r0.residual_sup,
                                       r0.report.sigma_min)};
        branch.points.push_back(std::move(bp));
    }

    double step = settings.initial_step;
    int retruncations = 0;
    Grid cur_grid = branch.points.back().profile.grid;
    // secant memory, valid only while the grid is unchanged
    std::optional<std::pair<Field, double>> prev_packed;  // (V, p) of point i-1
    std::optional<std::pair<Field, double>> prev_secant;  // previous (dV, dp)

    while (static_cast<int>(branch.points.size()) < settings.max_points) {
        const BranchPoint& last = branch.points.back();
        double p_last = last.param;
        if (p_last >= p_max - 1e-14) {
            cause = StopCause::RangeExhausted;
            break;
        }
        if (ops.stop_margin && ops.stop_margin(last.diagnostics) < ops.stop_margin_tol) {
            cause = StopCause::RangeExhausted;
            detail = "admissibility margin inside tolerance";
            break;
        }

        double p_cand = std::min(p_last + step, p_max);
        if (!ops.admissible(p_cand)) {
            step *= 0.5;
            if (step < step_floor) {
                cause = StopCause::RangeExhausted;
                detail = "step floor at the region boundary";
                break;
            }
            continue;
        }

        Packing pk = Packing::of(cur_grid);
        Field w = packed_weights(cur_grid, pk);
        Field v_last = pack_fields(last.profile.u, last.profile.eta, pk);

        // secant predictor; pseudo-arclength when the branch direction turns
        WaveProfile predictor = last.profile;
        bool use_pal = false;
        Field tau_v;
        double tau_p = 0.0, ds = 0.0;
        std::optional<std::pair<Field, double>> cur_secant;
        if (prev_packed) {
            Field dv(v_last.size());
            for (size_t i = 0; i < dv.size(); ++i) dv[i] = v_last[i] - prev_packed->first[i];
            double dp = p_last - prev_packed->second;
            double norm = std::sqrt(weighted_dot(w, dv, dv) + dp * dp);
            if (norm > 0.0) {
                if (prev_secant) {
                    double cosang =
                        (weighted_dot(w, dv, prev_secant->first) + dp * prev_secant->second);
                    double n2 = std::sqrt(weighted_dot(w, prev_secant->first, prev_secant->first) +
                                          prev_secant->second * prev_secant->second);
                    if (n2 > 0.0) {
                        cosang /= norm * n2;
                        double limit = std::cos(settings.secant_angle_deg * M_PI / 180.0);
                        if (cosang < limit) use_pal = true;
                    }
                }
                tau_v = dv;
                for (double& x : tau_v) x /= norm;
                tau_p = dp / norm;
                ds = (dp != 0.0) ? norm * (p_cand - p_last) / dp : norm;
                // natural-parameter secant extrapolation
                Field v_pred = v_last;
                double scale = (dp != 0.0) ? (p_cand - p_last) / dp : 0.0;
                for (size_t i = 0; i < v_pred.size(); ++i) v_pred[i] += scale * dv[i];
                unpack_fields(v_pred, pk, cur_grid.n, predictor.u, predictor.eta);
                cur_secant = std::make_pair(std::move(dv), dp);
            }
        }

        bool converged = false;
        WaveProfile accepted_profile = last.profile;
        double accepted_param = p_cand;
        double accepted_res = 0.0, accepted_sigma = 0.0;

        if (use_pal && !tau_v.empty()) {
            PalResult pal = pseudo_arclength_solve(ops, settings, last, tau_v, tau_p, ds);
            if (pal.ok && pal.param > p_last && ops.admissible(pal.param)) {
                converged = true;
                accepted_profile = pal.profile;
                accepted_param = pal.param;
                accepted_res = pal.residual_sup;
                BlockJacobian J = ops.jacobian(pal.profile, pal.param);
                accepted_sigma = smallest_singular_value(J);
            }
        }
        if (!converged) {
            NewtonResult nr = ops.solve(predictor, p_cand);
            if (nr.status == NewtonStatus::Converged) {
                converged = true;
                accepted_profile = nr.profile;
                accepted_param = p_cand;
                accepted_res = nr.residual_sup;
                accepted_sigma = nr.report.sigma_min;
            }
        }
        if (!converged) {
            step *= 0.5;
            if (step < step_floor) {
                cause = StopCause::NewtonFailure;
                detail = "newton failed after step refinement";
                break;
            }
            continue;
        }

        // re-truncate when the tail carries mass above tolerance
        if (accepted_profile.tail_sup() > settings.tail_tol && retruncations < 3) {
            ++retruncations;
            Grid bigger(cur_grid.half_length * 1.5,
                        static_cast<int>(std::lround(1.5 * (cur_grid.n - 1))) + 1,
                        Symmetry::EvenHalfLine);
            WaveProfile moved = accepted_profile;
            moved.grid = bigger;
            moved.u = resample_field(accepted_profile.u, cur_grid, bigger);
            moved.eta = resample_field(accepted_profile.eta, cur_grid, bigger);
            NewtonResult nr = ops.solve(moved, accepted_param);
            if (nr.status == NewtonStatus::Converged) {
                accepted_profile = nr.profile;
                accepted_res = nr.residual_sup;
                accepted_sigma = nr.report.sigma_min;
                cur_grid = bigger;
                prev_packed.reset();
                prev_secant.reset();
            }
        }

        BranchPoint bp{accepted_profile, accepted_param,
                       ops.diagnostics(accepted_profile, accepted_param, accepted_res,
                                       accepted_sigma)};
        if (!bp.diagnostics.nodal.all()) {
            cause = StopCause::NodalFailure;
            detail = "nodal pattern violated at the candidate point";
            break;
        }
        std::string why;
        if (ops.accept_extra && !ops.accept_extra(bp, why)) {
            cause = StopCause::NodalFailure;
            detail = why;
            break;
        }

        if (accepted_profile.grid == cur_grid) {
            prev_secant = std::move(cur_secant);
            prev_packed = std::make_pair(std::move(v_last), p_last);
        }
        branch.points.push_back(std::move(bp));
        if (step < settings.max_step) step = std::min(step * 1.3, settings.max_step);
    }

    if (static_cast<int>(branch.points.size()) >= settings.max_points)
        cause = StopCause::PointBudget;
    branch.reason = classify_termination(branch.points, cause, branch.kind, settings);
    branch.detail = detail.empty() ? to_string(branch.reason) : detail;
    return branch;
}

}  // namespace

Branch continue_slow(double beta, double lambda_max, const StepSettings& settings,
                     const Grid* grid_in) {
    SlowFamily fam(beta);
    Grid grid = grid_in ? *grid_in : default_slow_grid(beta);
    Branch branch;
    branch.kind = FamilyKind::Slow;
    branch.beta = beta;
    branch.lambda = 0.0;

    FamilyOps ops;
    ops.pattern = NodalPattern::Slow;
    ops.admissible = [fam](double lam) { return lam >= 0.0 && fam.ellipticity_gap(lam) > 0.0; };
    ops.solve = [fam, &settings](const WaveProfile& init, double lam) {
        return newton_solve(init, fam, lam, settings.newton);
    };
    ops.residual_packed = [fam, &settings](const WaveProfile& p, double lam) {
        ResidualPair r = slow_residual(p.u, p.eta, lam, fam, p.grid, settings.newton.order);
        return pack_fields(r.first, r.second, Packing::of(p.grid));
    };
    ops.jacobian = [fam, &settings](const WaveProfile& p, double lam) {
        return jacobian_slow(p.u, p.eta, lam, fam, p.grid, settings.newton.order);
    };
    ops.dres_dparam_packed = [fam, &settings](const WaveProfile& p, double) {
        // dF1/dlam = -t L eta + eta/(3 beta^2);  dF2/dlam = -L u
        const Grid& g = p.grid;
        auto d2 = second_derivative(g, g.natural_closure(), settings.newton.order);
        Field upp = d2.apply(p.u), epp = d2.apply(p.eta);
        double b2 = fam.beta * fam.beta, t = fam.t();
        Field f1(g.n), f2(g.n);
        for (int j = 0; j < g.n; ++j) {
            double Lu = p.u[j] - b2 * upp[j];
            double Le = p.eta[j] - b2 * epp[j];
            f1[j] = -t * Le + p.eta[j] / (3.0 * b2);
            f2[j] = -Lu;
        }
        return pack_fields(f1, f2, Packing::of(g));
    };
    ops.diagnostics = [fam](const WaveProfile& p, double, double rsup, double smin) {
        return make_diagnostics(p, fam, rsup, smin);
    };
    ops.accept_extra = nullptr;
    ops.stop_margin = [](const DiagnosticsReport& d) { return d.ellipticity_gap; };
    ops.stop_margin_tol = settings.gap_tol;

    WaveProfile start = stationary_exact(beta, Sign::Plus, grid);
    return trace_branch(ops, std::move(branch), std::move(start), 0.0, lambda_max, settings,
                        /*default_step=*/0.02, /*default_max_step=*/0.05);
}

Branch continue_fast(double lambda, double k, double s_max, const StepSettings& settings,
                     const Grid* grid_in) {
    if (!(lambda > 1.0)) throw std::invalid_argument("continue_fast: requires lambda > 1");
    if (!(k > 0.0 && k < lambda))
        throw std::invalid_argument("continue_fast: requires 0 < k < lambda");
    Grid grid = grid_in ? *grid_in : default_fast_grid(lambda);
    Branch branch;
    branch.kind = FamilyKind::Fast;
    branch.k = k;
    branch.lambda = lambda;
    const double s_star = FastFamily::s_star(lambda, k);

    FamilyOps ops;
    ops.pattern = NodalPattern::Fast;
    ops.admissible = [k, lambda, s_star](double s) { return s >= 0.0 && s < s_star; };
    ops.solve = [k, lambda, &settings](const WaveProfile& init, double s) {
        return newton_solve(init, FastFamily(k, s, lambda), settings.newton);
    };
    ops.residual_packed = [k, lambda, &settings](const WaveProfile& p, double s) {
        FastFamily fam(k, s, lambda);
        ResidualPair r = fast_residual(p.u, p.eta, fam, p.grid, settings.newton.order);
        return pack_fields(r.first, r.second, Packing::of(p.grid));
    };
    ops.jacobian = [k, lambda, &settings](const WaveProfile& p, double s) {
        return jacobian_fast(p.u, p.eta, FastFamily(k, s, lambda), p.grid,
                             settings.newton.order);
    };
    ops.dres_dparam_packed = [k, lambda, &settings](const WaveProfile& p, double) {
        // dF1/ds = k u'' + lambda eta'';  dF2/ds = -(2k+1) lambda u'' + k eta''
        const Grid& g = p.grid;
        auto d2 = second_derivative(g, g.natural_closure(), settings.newton.order);
        Field upp = d2.apply(p.u), epp = d2.apply(p.eta);
        Field f1(g.n), f2(g.n);
        for (int j = 0; j < g.n; ++j) {
            f1[j] = k * upp[j] + lambda * epp[j];
            f2[j] = -(2.0 * k + 1.0) * lambda * upp[j] + k * epp[j];
        }
        return pack_fields(f1, f2, Packing::of(g));
    };
    ops.diagnostics = [k, lambda](const WaveProfile& p, double s, double rsup, double smin) {
        return make_diagnostics(p, FastFamily(k, s, lambda), rsup, smin);
    };
    ops.accept_extra = [](const BranchPoint& bp, std::string& why) {
        double slack = bp.diagnostics.eta_bound_slack;
        if (std::isfinite(slack) && slack < -1e-8 * std::max(1.0, std::abs(bp.profile.eta[0]))) {
            why = "crest elevation exceeded its admissible bound";
            return false;
        }
        return true;
    };
    ops.stop_margin = [](const DiagnosticsReport& d) {
        return std::min(d.ellipticity_gap, d.stagnation_gap);
    };
    ops.stop_margin_tol = std::min(settings.gap_tol, settings.stag_tol);

    WaveProfile start = boussinesq_fast_profile(lambda, grid);
    return trace_branch(ops, std::move(branch), std::move(start), 0.0, s_max, settings,
                        /*default_step=*/0.005, /*default_max_step=*/0.02);
}

}  // namespace bouss
