/**
 * @file discretize.hpp
 * @brief Grids, banded difference operators, boundary closures, and the
 *        Helmholtz solve (I - beta^2 D2)^{-1} on truncated domains.
 *
 * Profiles live either on an even-half-line grid [0, L] (evenness encoded by
 * ghost reflection at x = 0, homogeneous Dirichlet at x = L) or on a full-line
 * grid [-L, L] with Dirichlet at both ends. All stencils are centered; second
 * and fourth order variants are available, with the solver using second order
 * and tight closed-form diagnostics the fourth.
 */

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bouss {

using Field = std::vector<double>;

double sup_norm(const Field& f);

enum class Symmetry {
    EvenHalfLine,  ///< nodes x_j = j*h on [0, L], h = L/(n-1)
    FullLine       ///< nodes x_j = -L + j*h on [-L, L], h = 2L/(n-1)
};

enum class Closure {
    NeumannEvenDirichlet,  ///< ghost reflection at x = 0, zero beyond x = L
    DirichletBoth          ///< zero extension beyond both ends
};

struct Grid {
    double half_length = 0.0;
    int n = 0;
    Symmetry symmetry = Symmetry::EvenHalfLine;

    Grid() = default;
    Grid(double L, int n_points, Symmetry sym = Symmetry::EvenHalfLine);

    double spacing() const {
        return symmetry == Symmetry::EvenHalfLine ? half_length / (n - 1)
                                                  : 2.0 * half_length / (n - 1);
    }
    double point(int j) const {
        return symmetry == Symmetry::EvenHalfLine ? j * spacing()
                                                  : -half_length + j * spacing();
    }
    Field points() const;
    Closure natural_closure() const {
        return symmetry == Symmetry::EvenHalfLine ? Closure::NeumannEvenDirichlet
                                                  : Closure::DirichletBoth;
    }
    bool operator==(const Grid& o) const {
        return half_length == o.half_length && n == o.n && symmetry == o.symmetry;
    }
};

/// Banded difference operator, bandwidth <= 2 (3- or 5-point stencil) with the
/// boundary closure folded into the first and last rows. Interior rows of a
/// second-difference operator sum to zero.
struct DiscreteOperator {
    int n = 0;
    int halfwidth = 0;  // 1 or 2
    std::vector<std::array<double, 5>> rows;  // rows[i][halfwidth + d] multiplies f[i + d]

    Field apply(const Field& f) const;
    double coeff(int i, int j) const {
        int d = j - i;
        return (d < -halfwidth || d > halfwidth) ? 0.0 : rows[i][halfwidth + d];
    }
};

/// Centered second-derivative operator. order = 2 (3-point) or 4 (5-point).
/// The even closure assumes the operand is an even function of x.
DiscreteOperator second_derivative(const Grid& grid, Closure bc, int order = 2);

/// Centered first-derivative operator with the same closure conventions.
DiscreteOperator first_derivative(const Grid& grid, Closure bc, int order = 2);

/// General banded matrix in LAPACK band storage, factored with dgbtrf.
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    void add(int i, int j, double v);
    void set(int i, int j, double v);
    double get(int i, int j) const;

    int kl() const { return kl_; }
    int ku() const { return ku_; }

private:
    friend class BandedLU;
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;  // column-major, entry (i,j) at ab_[kl+ku+i-j + j*ldab]
};

/// LU factors of a BandedMatrix (partial pivoting). Immutable once built.
class BandedLU {
public:
    explicit BandedLU(const BandedMatrix& m);
    bool ok() const { return info_ == 0; }
    /// Solve A x = b (or A^T x = b); returns x.
    Field solve(const Field& b, bool transpose = false) const;

private:
    int n_, kl_, ku_, ldab_, info_;
    std::vector<double> ab_;
    std::vector<std::int32_t> ipiv_;
};

/// Solve (I - beta^2 D2) phi = rhs with the grid's natural closure and
/// phi = 0 at the Dirichlet end(s).
Field solve_L(const Grid& grid, double beta, const Field& rhs, int order = 2);

/// Least-squares slope of log|f| over the fit window (last 25% of the grid,
/// excluding the final 5%). Throws std::domain_error if the field changes
/// sign or vanishes inside the window.
double decay_rate(const Field& f, const Grid& grid);

/// Trapezoid quadrature of a sampled even integrand; for an even-half-line
/// grid the result accounts for both half lines.
double integrate(const Field& f, const Grid& grid);

/// Cubic (4-point Lagrange) interpolation of f at x; even reflection left of
/// an even-half-line grid, zero beyond the decayed end(s).
double interpolate(const Field& f, const Grid& grid, double x);

/// Resample a field onto another grid via `interpolate`.
Field resample_field(const Field& f, const Grid& from, const Grid& to);

}  // namespace bouss
