/**
 * @file solver.hpp
 * @brief Damped Newton iteration with analytic block Jacobians for the slow
 *        and fast systems, plus linearized-operator monitors.
 *
 * The nonlinear systems are solved on the even-half-line grid, which removes
 * the translation kernel by symmetry. Unknowns at Dirichlet-pinned boundary
 * nodes are eliminated, so the packed Jacobian at the stationary base point
 * is exactly self-adjoint in the trapezoid-weighted inner product.
 */

#pragma once

#include "bouss/model.hpp"

namespace bouss {

enum class ResidualForm { Family, Abcd };

struct NewtonSettings {
    int max_iters = 25;
    double residual_tol = 1e-10;   // sup norm
    bool damping = true;           // halving line search on the residual norm
    int max_halvings = 8;
    int order = 2;                 // difference order of residual and Jacobian
    ResidualForm form = ResidualForm::Family;
    bool want_report = true;       // sigma_min + translation-mode residual
};

enum class NewtonStatus {
    Converged,
    MaxIterations,
    LinearSolveFailure,
    LeftNoStagnationRegion,  // fast iterate reached max|u| >= lambda
    LeftEllipticityRegion,   // slow parameters with nonpositive gap
    NonFinite
};

struct LinearizationReport {
    double sigma_min = 0.0;                  // smallest singular value, even subspace
    double translation_mode_residual = 0.0;  // |J (U')| / |U'|_C2 on the full line
};

struct NewtonResult {
    WaveProfile profile;
    LinearizationReport report;
    NewtonStatus status = NewtonStatus::MaxIterations;
    int iterations = 0;
    double residual_sup = 0.0;
    std::vector<double> residual_history;  // sup norms, including the initial one
};

/// Index packing that eliminates Dirichlet-pinned boundary unknowns.
struct Packing {
    int lo = 0;  // first retained node
    int m = 0;   // retained nodes per field

    static Packing of(const Grid& g) {
        Packing p;
        p.lo = g.symmetry == Symmetry::FullLine ? 1 : 0;
        p.m = g.n - 1 - p.lo;
        return p;
    }
};

Field pack_fields(const Field& u, const Field& eta, const Packing& p);
void unpack_fields(const Field& v, const Packing& p, int n, Field& u, Field& eta);

/// 2x2 block operator: each block is a banded row set over the full grid.
struct BlockJacobian {
    Grid grid;
    DiscreteOperator a11, a12, a21, a22;

    /// Apply to full-length fields (v, zeta) -> (r1, r2).
    void apply(const Field& v, const Field& zeta, Field& r1, Field& r2) const;
    /// Interleaved banded matrix over packed unknowns.
    BandedMatrix assemble(const Packing& p) const;
};

/// Frechet derivative of slow_residual. At (U0, 0) it reduces to
/// L + [[eta0, u0], [u0, 0]].
BlockJacobian jacobian_slow(const Field& u, const Field& eta, double lambda,
                            const SlowFamily& fam, const Grid& grid, int order = 2);

/// Frechet derivative of fast_residual. At s = 0 the full-line kernel is
/// spanned by the translate (u_f', eta_f').
BlockJacobian jacobian_fast(const Field& u, const Field& eta, const FastFamily& fam,
                            const Grid& grid, int order = 2);

/// Frechet derivative of abcd_residual under the given coefficients.
BlockJacobian jacobian_abcd(const Field& u, const Field& eta, double lambda,
                            const ABCDParams& params, const Grid& grid, int order = 2);

/// L2 quadrature weights on packed unknowns (factor 2 off-origin on the
/// even half line).
Field packed_weights(const Grid& grid, const Packing& p);

/// Smallest singular value of the weighted-similarity transform of the packed
/// Jacobian, by inverse power iteration on J^T J (50-iteration cap).
double smallest_singular_value(const BlockJacobian& J, int max_iters = 50);

/// Relative asymmetry of the weighted packed Jacobian; ~1e-16 exactly at the
/// self-adjoint points (slow family, lambda = 0) and O(lambda) elsewhere.
double symmetry_defect(const BlockJacobian& J);

/// Mirror an even-half-line profile onto the full line (2n-1 nodes).
WaveProfile mirror_to_full_line(const WaveProfile& p);

/// |J applied to the discrete derivative of the profile|_sup divided by the
/// C^2 grid norm of that derivative; measures how well the discrete operator
/// annihilates the translation mode.
double kernel_mode_residual(const WaveProfile& full_profile, const BlockJacobian& J,
                            int order = 4);

NewtonResult newton_solve(const WaveProfile& initial, const SlowFamily& fam, double lambda,
                          const NewtonSettings& settings = {});
NewtonResult newton_solve(const WaveProfile& initial, const FastFamily& fam,
                          const NewtonSettings& settings = {});

}  // namespace bouss
