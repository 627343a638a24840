#include "bouss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace bouss {

Field pack_fields(const Field& u, const Field& eta, const Packing& p) {
    Field v(2 * p.m);
    for (int i = 0; i < p.m; ++i) {
        v[2 * i] = u[p.lo + i];
        v[2 * i + 1] = eta[p.lo + i];
    }
    return v;
}

void unpack_fields(const Field& v, const Packing& p, int n, Field& u, Field& eta) {
    u.assign(n, 0.0);
    eta.assign(n, 0.0);
    for (int i = 0; i < p.m; ++i) {
        u[p.lo + i] = v[2 * i];
        eta[p.lo + i] = v[2 * i + 1];
    }
}

void BlockJacobian::apply(const Field& v, const Field& zeta, Field& r1, Field& r2) const {
    Field t1 = a11.apply(v), t2 = a12.apply(zeta);
    Field t3 = a21.apply(v), t4 = a22.apply(zeta);
    r1.resize(grid.n);
    r2.resize(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        r1[i] = t1[i] + t2[i];
        r2[i] = t3[i] + t4[i];
    }
}

BandedMatrix BlockJacobian::assemble(const Packing& p) const {
    int hw = std::max({a11.halfwidth, a12.halfwidth, a21.halfwidth, a22.halfwidth});
    int bw = 2 * hw + 1;
    BandedMatrix A(2 * p.m, bw, bw);
    auto put = [&](const DiscreteOperator& blk, int r, int c) {
        for (int i = 0; i < p.m; ++i) {
            int gi = p.lo + i;
            for (int d = -blk.halfwidth; d <= blk.halfwidth; ++d) {
                int gj = gi + d;
                int j = gj - p.lo;
                if (j < 0 || j >= p.m) continue;  // pinned boundary values are zero
                double val = blk.rows[gi][blk.halfwidth + d];
                if (val != 0.0) A.add(2 * i + r, 2 * j + c, val);
            }
        }
    };
    put(a11, 0, 0);
    put(a12, 0, 1);
    put(a21, 1, 0);
    put(a22, 1, 1);
    return A;
}

namespace {

DiscreteOperator scaled_d2(const Grid& grid, int order, double factor) {
    DiscreteOperator op = second_derivative(grid, grid.natural_closure(), order);
    for (auto& row : op.rows)
        for (double& c : row) c *= factor;
    return op;
}

void add_diag(DiscreteOperator& op, const Field& d) {
    for (int i = 0; i < op.n; ++i) op.rows[i][op.halfwidth] += d[i];
}

void add_diag(DiscreteOperator& op, double d) {
    for (int i = 0; i < op.n; ++i) op.rows[i][op.halfwidth] += d;
}

}  // namespace

BlockJacobian jacobian_slow(const Field& u, const Field& eta, double lambda,
                            const SlowFamily& fam, const Grid& grid, int order) {
    if (static_cast<int>(u.size()) != grid.n || static_cast<int>(eta.size()) != grid.n)
        throw std::invalid_argument("jacobian_slow: size mismatch");
    const double b2 = fam.beta * fam.beta, t = fam.t();
    BlockJacobian J;
    J.grid = grid;
    // F1 = L(u - lambda t eta) + (lambda/(3b2) + u) eta
    J.a11 = scaled_d2(grid, order, -b2);
    add_diag(J.a11, 1.0);
    add_diag(J.a11, eta);
    J.a12 = scaled_d2(grid, order, lambda * t * b2);
    add_diag(J.a12, -lambda * t);
    Field d12(grid.n);
    for (int i = 0; i < grid.n; ++i) d12[i] = lambda / (3.0 * b2) + u[i];
    add_diag(J.a12, d12);
    // F2 = L(eta - lambda u) + u^2/2
    J.a21 = scaled_d2(grid, order, lambda * b2);
    add_diag(J.a21, -lambda);
    add_diag(J.a21, u);
    J.a22 = scaled_d2(grid, order, -b2);
    add_diag(J.a22, 1.0);
    return J;
}

BlockJacobian jacobian_fast(const Field& u, const Field& eta, const FastFamily& fam,
                            const Grid& grid, int order) {
    if (static_cast<int>(u.size()) != grid.n || static_cast<int>(eta.size()) != grid.n)
        throw std::invalid_argument("jacobian_fast: size mismatch");
    const double k = fam.k, s = fam.s, lam = fam.lambda, bb = fam.b_bar();
    BlockJacobian J;
    J.grid = grid;
    J.a11 = scaled_d2(grid, order, k * s);
    add_diag(J.a11, 1.0);
    add_diag(J.a11, eta);
    J.a12 = scaled_d2(grid, order, lam * s);
    add_diag(J.a12, -lam);
    add_diag(J.a12, u);
    J.a21 = scaled_d2(grid, order, bb * lam);
    add_diag(J.a21, -lam);
    add_diag(J.a21, u);
    J.a22 = scaled_d2(grid, order, k * s);
    add_diag(J.a22, 1.0);
    return J;
}

BlockJacobian jacobian_abcd(const Field& u, const Field& eta, double lambda,
                            const ABCDParams& params, const Grid& grid, int order) {
    BlockJacobian J;
    J.grid = grid;
    // first equation: c eta'' + eta - lambda u + d lambda u'' + u^2/2
    J.a11 = scaled_d2(grid, order, params.d * lambda);
    add_diag(J.a11, -lambda);
    add_diag(J.a11, u);
    J.a12 = scaled_d2(grid, order, params.c);
    add_diag(J.a12, 1.0);
    // second equation: a u'' + u - lambda eta + b lambda eta'' + eta u
    J.a21 = scaled_d2(grid, order, params.a);
    add_diag(J.a21, 1.0);
    add_diag(J.a21, eta);
    J.a22 = scaled_d2(grid, order, params.b * lambda);
    add_diag(J.a22, -lambda);
    add_diag(J.a22, u);
    return J;
}

Field packed_weights(const Grid& grid, const Packing& p) {
    double h = grid.spacing();
    Field w(2 * p.m, grid.symmetry == Symmetry::EvenHalfLine ? 2.0 * h : h);
    if (grid.symmetry == Symmetry::EvenHalfLine) {
        w[0] = h;
        w[1] = h;
    }
    return w;
}

double smallest_singular_value(const BlockJacobian& J, int max_iters) {
    Packing p = Packing::of(J.grid);
    BandedMatrix A = J.assemble(p);
    BandedLU lu(A);
    if (!lu.ok()) return 0.0;
    Field w = packed_weights(J.grid, p);
    Field sw(w.size());
    for (size_t i = 0; i < w.size(); ++i) sw[i] = std::sqrt(w[i]);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Field v(2 * p.m);
    for (double& x : v) x = dist(rng);
    double nu = 0.0, nu_prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        Field a(v.size());
        for (size_t i = 0; i < v.size(); ++i) a[i] = sw[i] * v[i];
        Field b = lu.solve(a, /*transpose=*/true);
        for (size_t i = 0; i < b.size(); ++i) b[i] /= w[i];
        Field c = lu.solve(b, /*transpose=*/false);
        for (size_t i = 0; i < c.size(); ++i) c[i] *= sw[i];
        double nrm = 0.0;
        for (double x : c) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return 0.0;
        nu = nrm;
        for (size_t i = 0; i < c.size(); ++i) v[i] = c[i] / nrm;
        if (it > 3 && std::abs(nu - nu_prev) < 1e-12 * nu) break;
        nu_prev = nu;
    }
    return 1.0 / std::sqrt(nu);
}

double symmetry_defect(const BlockJacobian& J) {
    Packing p = Packing::of(J.grid);
    BandedMatrix A = J.assemble(p);
    Field w = packed_weights(J.grid, p);
    int n = 2 * p.m, bw = A.ku();
    double defect = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - bw); j <= std::min(n - 1, i + bw); ++j) {
            double sij = std::sqrt(w[i] / w[j]) * A.get(i, j);
            double sji = std::sqrt(w[j] / w[i]) * A.get(j, i);
            defect = std::max(defect, std::abs(sij - sji));
            scale = std::max(scale, std::abs(sij));
        }
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

WaveProfile mirror_to_full_line(const WaveProfile& p) {
    if (p.grid.symmetry != Symmetry::EvenHalfLine)
        throw std::invalid_argument("mirror_to_full_line: expects even-half-line profile");
    int n = p.grid.n;
    WaveProfile q;
    q.grid = Grid(p.grid.half_length, 2 * n - 1, Symmetry::FullLine);
    q.lambda = p.lambda;
    q.params = p.params;
    q.u.resize(q.grid.n);
    q.eta.resize(q.grid.n);
    for (int j = 0; j < q.grid.n; ++j) {
        int i = std::abs(j - (n - 1));
        q.u[j] = p.u[i];
        q.eta[j] = p.eta[i];
    }
    return q;
}

double kernel_mode_residual(const WaveProfile& full_profile, const BlockJacobian& J,
                            int order) {
    const Grid& g = full_profile.grid;
    auto d1 = first_derivative(g, g.natural_closure(), order);
    auto d2 = second_derivative(g, g.natural_closure(), order);
    Field vu = d1.apply(full_profile.u), ve = d1.apply(full_profile.eta);
    Field r1, r2;
    J.apply(vu, ve, r1, r2);
    Packing p = Packing::of(g);
    double sup = 0.0;
    for (int i = 0; i < p.m; ++i)
        sup = std::max({sup, std::abs(r1[p.lo + i]), std::abs(r2[p.lo + i])});
    Field vup = d1.apply(vu), vep = d1.apply(ve);
    Field vupp = d2.apply(vu), vepp = d2.apply(ve);
    double c2 = std::max({sup_norm(vu), sup_norm(ve), sup_norm(vup), sup_norm(vep),
                          sup_norm(vupp), sup_norm(vepp)});
    return c2 > 0.0 ? sup / c2 : sup;
}

namespace {

struct SystemHooks {
    std::function<ResidualPair(const Field&, const Field&)> residual;
    std::function<BlockJacobian(const Field&, const Field&)> jacobian;
    std::function<bool(const Field&)> in_region;  // no-stagnation / ellipticity guard
    NewtonStatus region_status = NewtonStatus::LeftEllipticityRegion;
};

NewtonResult newton_core(const WaveProfile& initial, const SystemHooks& sys,
                         const NewtonSettings& settings, double lambda,
                         const ABCDParams& params) {
    const Grid& grid = initial.grid;
    Packing pk = Packing::of(grid);
    Field u = initial.u, eta = initial.eta;
    // pinned boundary values
    u[grid.n - 1] = 0.0;
    eta[grid.n - 1] = 0.0;

    NewtonResult res;
    res.profile = initial;
    res.profile.lambda = lambda;
    res.profile.params = params;

    auto packed_residual = [&](const Field& uu, const Field& ee) {
        ResidualPair rp = sys.residual(uu, ee);
        return pack_fields(rp.first, rp.second, pk);
    };

    Field F = packed_residual(u, eta);
    double rnorm = sup_norm(F);
    res.residual_history.push_back(rnorm);

    for (int it = 0; it < settings.max_iters; ++it) {
        if (!std::isfinite(rnorm)) {
            res.status = NewtonStatus::NonFinite;
            break;
        }
        if (!sys.in_region(u)) {
            res.status = sys.region_status;
            break;
        }
        if (rnorm < settings.residual_tol) {
            res.status = NewtonStatus::Converged;
            break;
        }
        BlockJacobian J = sys.jacobian(u, eta);
        BandedMatrix A = J.assemble(pk);
        BandedLU lu(A);
        if (!lu.ok()) {
            res.status = NewtonStatus::LinearSolveFailure;
            break;
        }
        Field step = lu.solve(F);
        for (double& x : step) x = -x;

        double alpha = 1.0;
        Field u_new, eta_new, F_new;
        double rnew = 0.0;
        int halvings = 0;
        while (true) {
            Field v = pack_fields(u, eta, pk);
            for (size_t i = 0; i < v.size(); ++i) v[i] += alpha * step[i];
            unpack_fields(v, pk, grid.n, u_new, eta_new);
            F_new = packed_residual(u_new, eta_new);
            rnew = sup_norm(F_new);
            if (!settings.damping) break;
            if (std::isfinite(rnew) && rnew < rnorm) break;
            if (++halvings > settings.max_halvings) break;
            alpha *= 0.5;
        }
        u = std::move(u_new);
        eta = std::move(eta_new);
        F = std::move(F_new);
        rnorm = rnew;
        res.residual_history.push_back(rnorm);
        res.iterations = it + 1;
    }
    if (res.status == NewtonStatus::MaxIterations && rnorm < settings.residual_tol)
        res.status = NewtonStatus::Converged;

    res.profile.u = u;
    res.profile.eta = eta;
    res.residual_sup = rnorm;

    if (settings.want_report && res.status == NewtonStatus::Converged) {
        BlockJacobian J = sys.jacobian(u, eta);
        res.report.sigma_min = smallest_singular_value(J);
        // translation-mode residual needs the full-line twin; the family
        // wrappers fill it in since they know how to rebuild the Jacobian.
    }
    return res;
}

}  // namespace

NewtonResult newton_solve(const WaveProfile& initial, const SlowFamily& fam, double lambda,
                          const NewtonSettings& settings) {
    if (initial.grid.symmetry != Symmetry::EvenHalfLine)
        throw std::invalid_argument("newton_solve: even-half-line grid required");
    SystemHooks sys;
    const Grid grid = initial.grid;
    ABCDParams params = fam.params();
    if (settings.form == ResidualForm::Family) {
        sys.residual = [&, grid](const Field& u, const Field& e) {
            return slow_residual(u, e, lambda, fam, grid, settings.order);
        };
        sys.jacobian = [&, grid](const Field& u, const Field& e) {
            return jacobian_slow(u, e, lambda, fam, grid, settings.order);
        };
    } else {
        sys.residual = [&, grid, params](const Field& u, const Field& e) {
            WaveProfile p{grid, u, e, lambda, params};
            return abcd_residual(p, settings.order);
        };
        sys.jacobian = [&, grid, params](const Field& u, const Field& e) {
            return jacobian_abcd(u, e, lambda, params, grid, settings.order);
        };
    }
    sys.in_region = [&](const Field&) { return fam.ellipticity_gap(lambda) > 0.0; };
    sys.region_status = NewtonStatus::LeftEllipticityRegion;

    NewtonResult res = newton_core(initial, sys, settings, lambda, params);
    if (settings.want_report && res.status == NewtonStatus::Converged) {
        WaveProfile full = mirror_to_full_line(res.profile);
        BlockJacobian Jf =
            jacobian_slow(full.u, full.eta, lambda, fam, full.grid, settings.order);
        res.report.translation_mode_residual = kernel_mode_residual(full, Jf);
    }
    return res;
}

NewtonResult newton_solve(const WaveProfile& initial, const FastFamily& fam,
                          const NewtonSettings& settings) {
    if (initial.grid.symmetry != Symmetry::EvenHalfLine)
        throw std::invalid_argument("newton_solve: even-half-line grid required");
    SystemHooks sys;
    const Grid grid = initial.grid;
    ABCDParams params = fam.params();
    double lambda = fam.lambda;
    if (settings.form == ResidualForm::Family) {
        sys.residual = [&, grid](const Field& u, const Field& e) {
            return fast_residual(u, e, fam, grid, settings.order);
        };
        sys.jacobian = [&, grid](const Field& u, const Field& e) {
            return jacobian_fast(u, e, fam, grid, settings.order);
        };
    } else {
        sys.residual = [&, grid, params, lambda](const Field& u, const Field& e) {
            WaveProfile p{grid, u, e, lambda, params};
            ResidualPair r = abcd_residual(p, settings.order);
            std::swap(r.first, r.second);  // match the fast-system equation order
            return r;
        };
        sys.jacobian = [&, grid, params, lambda](const Field& u, const Field& e) {
            BlockJacobian J = jacobian_abcd(u, e, lambda, params, grid, settings.order);
            std::swap(J.a11, J.a21);
            std::swap(J.a12, J.a22);
            return J;
        };
    }
    sys.in_region = [lambda](const Field& u) { return sup_norm(u) < lambda; };
    sys.region_status = NewtonStatus::LeftNoStagnationRegion;

    NewtonResult res = newton_core(initial, sys, settings, lambda, params);
    if (settings.want_report && res.status == NewtonStatus::Converged) {
        WaveProfile full = mirror_to_full_line(res.profile);
        BlockJacobian Jf = jacobian_fast(full.u, full.eta, fam, full.grid, settings.order);
        res.report.translation_mode_residual = kernel_mode_residual(full, Jf);
    }
    return res;
}

}  // namespace bouss
