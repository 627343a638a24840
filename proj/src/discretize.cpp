#include "bouss/discretize.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace bouss {

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

Grid::Grid(double L, int n_points, Symmetry sym)
    : half_length(L), n(n_points), symmetry(sym) {
    if (!(L > 0.0)) throw std::invalid_argument("Grid: half_length must be positive");
    if (n < 16) throw std::invalid_argument("Grid: need at least 16 points");
}

Field Grid::points() const {
    Field x(n);
    for (int j = 0; j < n; ++j) x[j] = point(j);
    return x;
}

Field DiscreteOperator::apply(const Field& f) const {
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("DiscreteOperator::apply: size mismatch");
    Field r(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int d = -halfwidth; d <= halfwidth; ++d) {
            int j = i + d;
            if (j < 0 || j >= n) continue;
            acc += rows[i][halfwidth + d] * f[j];
        }
        r[i] = acc;
    }
    return r;
}

namespace {

// Base centered stencils; boundary rows fold ghosts per the closure.
std::array<double, 5> d2_stencil(int order, double h) {
    if (order == 2) return {0.0, 1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h), 0.0};
    double s = 1.0 / (12.0 * h * h);
    return {-s, 16.0 * s, -30.0 * s, 16.0 * s, -s};
}

std::array<double, 5> d1_stencil(int order, double h) {
    if (order == 2) return {0.0, -0.5 / h, 0.0, 0.5 / h, 0.0};
    double s = 1.0 / (12.0 * h);
    return {s, -8.0 * s, 0.0, 8.0 * s, -s};
}

DiscreteOperator build_op(const Grid& grid, Closure bc, int order,
                          const std::array<double, 5>& stencil) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("difference operator: order must be 2 or 4");
    bool half = grid.symmetry == Symmetry::EvenHalfLine;
    if ((half && bc != Closure::NeumannEvenDirichlet) ||
        (!half && bc != Closure::DirichletBoth))
        throw std::invalid_argument("difference operator: unsupported boundary closure");

    DiscreteOperator op;
    op.n = grid.n;
    op.halfwidth = order / 2;
    op.rows.assign(grid.n, {0.0, 0.0, 0.0, 0.0, 0.0});
    int hw = op.halfwidth;
    for (int i = 0; i < grid.n; ++i) {
        for (int d = -hw; d <= hw; ++d) {
            double c = stencil[2 + d];
            if (c == 0.0) continue;
            int j = i + d;
            if (j < 0) {
                if (bc == Closure::NeumannEvenDirichlet) {
                    // even reflection: the ghost value f(-x) equals f(x)
                    int jr = -j;
                    op.rows[i][hw + (jr - i)] += c;
                }
                continue;  // DirichletBoth: zero extension
            }
            if (j >= grid.n) continue;  // zero extension past the tail
            op.rows[i][hw + d] += c;
        }
    }
    return op;
}

}  // namespace

DiscreteOperator second_derivative(const Grid& grid, Closure bc, int order) {
    return build_op(grid, bc, order, d2_stencil(order, grid.spacing()));
}

DiscreteOperator first_derivative(const Grid& grid, Closure bc, int order) {
    return build_op(grid, bc, order, d1_stencil(order, grid.spacing()));
}

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<size_t>(ldab_) * n, 0.0) {}

void BandedMatrix::add(int i, int j, double v) {
    ab_[static_cast<size_t>(kl_ + ku_ + i - j) + static_cast<size_t>(j) * ldab_] += v;
}

void BandedMatrix::set(int i, int j, double v) {
    ab_[static_cast<size_t>(kl_ + ku_ + i - j) + static_cast<size_t>(j) * ldab_] = v;
}

double BandedMatrix::get(int i, int j) const {
    if (j - i > ku_ || i - j > kl_) return 0.0;
    return ab_[static_cast<size_t>(kl_ + ku_ + i - j) + static_cast<size_t>(j) * ldab_];
}

BandedLU::BandedLU(const BandedMatrix& m)
    : n_(m.n_), kl_(m.kl_), ku_(m.ku_), ldab_(m.ldab_), ab_(m.ab_), ipiv_(m.n_) {
    info_ = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab_, ipiv_.data());
}

Field BandedLU::solve(const Field& b, bool transpose) const {
    if (info_ != 0) throw std::runtime_error("BandedLU: factorization failed");
    if (static_cast<int>(b.size()) != n_)
        throw std::invalid_argument("BandedLU::solve: size mismatch");
    Field x = b;
    int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, transpose ? 'T' : 'N', n_, kl_, ku_, 1,
                              ab_.data(), ldab_, ipiv_.data(), x.data(), n_);
    if (info != 0) throw std::runtime_error("BandedLU: solve failed");
    return x;
}

Field solve_L(const Grid& grid, double beta, const Field& rhs, int order) {
    if (!(beta > 0.0)) throw std::invalid_argument("solve_L: beta must be positive");
    if (static_cast<int>(rhs.size()) != grid.n)
        throw std::invalid_argument("solve_L: size mismatch");
    DiscreteOperator d2 = second_derivative(grid, grid.natural_closure(), order);
    int hw = d2.halfwidth;
    int n = grid.n;
    BandedMatrix A(n, hw, hw);
    bool half = grid.symmetry == Symmetry::EvenHalfLine;
    int lo = half ? 0 : 1;       // Dirichlet-pinned rows become identities
    int hi = n - 2;
    Field b = rhs;
    for (int i = 0; i < n; ++i) {
        if (i < lo || i > hi) {
            A.set(i, i, 1.0);
            b[i] = 0.0;
            continue;
        }
        A.add(i, i, 1.0);
        for (int d = -hw; d <= hw; ++d) {
            int j = i + d;
            if (j < 0 || j >= n) continue;
            double c = d2.rows[i][hw + d];
            if (c != 0.0) A.add(i, j, -beta * beta * c);
        }
    }
    BandedLU lu(A);
    if (!lu.ok()) throw std::runtime_error("solve_L: singular factorization");
    return lu.solve(b);
}

double decay_rate(const Field& f, const Grid& grid) {
    int n = grid.n;
    int i0 = static_cast<int>(std::ceil(0.75 * (n - 1)));
    int i1 = static_cast<int>(std::floor(0.95 * (n - 1)));
    if (i1 <= i0 + 2) throw std::domain_error("decay_rate: fit window too small");
    double sign = f[i0] > 0 ? 1.0 : -1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int i = i0; i <= i1; ++i) {
        if (f[i] == 0.0 || (f[i] > 0) != (sign > 0))
            throw std::domain_error("decay_rate: sign change in fit window");
        double x = grid.point(i), y = std::log(std::abs(f[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double integrate(const Field& f, const Grid& grid) {
    if (static_cast<int>(f.size()) != grid.n)
        throw std::invalid_argument("integrate: size mismatch");
    double h = grid.spacing();
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i < grid.n - 1; ++i) s += f[i];
    s *= h;
    return grid.symmetry == Symmetry::EvenHalfLine ? 2.0 * s : s;
}

double interpolate(const Field& f, const Grid& grid, double x) {
    if (grid.symmetry == Symmetry::EvenHalfLine && x < 0.0) x = -x;
    double x0 = grid.point(0), h = grid.spacing();
    double xe = grid.point(grid.n - 1);
    if (x > xe || (grid.symmetry == Symmetry::FullLine && x < x0)) return 0.0;
    int j = static_cast<int>(std::floor((x - x0) / h));
    int j0 = std::clamp(j - 1, 0, grid.n - 4);
    // 4-point Lagrange on nodes j0..j0+3
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) {
        double num = 1.0, den = 1.0;
        double xm = grid.point(j0 + m);
        for (int l = 0; l < 4; ++l) {
            if (l == m) continue;
            num *= x - grid.point(j0 + l);
            den *= xm - grid.point(j0 + l);
        }
        acc += f[j0 + m] * num / den;
    }
    return acc;
}

Field resample_field(const Field& f, const Grid& from, const Grid& to) {
    Field g(to.n);
    for (int j = 0; j < to.n; ++j) g[j] = interpolate(f, from, to.point(j));
    return g;
}

}  // namespace bouss
