#include "curvflow/lp.hpp"

#include <cmath>
#include <limits>

namespace curvflow {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
    Matrix T;                // m x (ncols + 1), last column is rhs
    std::vector<int> basis;  // basic variable per row
    int ncols;

    void pivot(int row, int col) {
        T.row(row) /= T(row, col);
        for (Eigen::Index i = 0; i < T.rows(); ++i) {
            if (i == row) continue;
            double f = T(i, col);
            if (f != 0.0) T.row(i) -= f * T.row(row);
        }
        basis[row] = col;
    }

    // Bland's rule over the allowed columns; cost is the maximization objective.
    LpStatus run(const Vector& cost, const std::vector<char>& allowed) {
        int m = static_cast<int>(T.rows());
        while (true) {
            // reduced cost r_j = cost_j - sum_i cost_basis(i) * T(i,j)
            int enter = -1;
            for (int j = 0; j < ncols && enter < 0; ++j) {
                if (!allowed[j]) continue;
                double r = cost(j);
                for (int i = 0; i < m; ++i) r -= cost(basis[i]) * T(i, j);
                if (r > kTol) enter = j;
            }
            if (enter < 0) return LpStatus::optimal;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double a = T(i, enter);
                if (a > kTol) {
                    double ratio = T(i, ncols) / a;
                    if (ratio < best - kTol ||
                        (ratio < best + kTol && (leave < 0 || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave < 0) return LpStatus::unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult simplex_solve(const Vector& c, const Matrix& A, const Vector& b) {
    int m = static_cast<int>(A.rows());
    int n = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != n) throw Error("lp: dimension mismatch");

    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i)
        if (b(i) < 0.0) art_rows.push_back(i);
    int nart = static_cast<int>(art_rows.size());
    int ncols = n + m + nart;

    Tableau tab;
    tab.ncols = ncols;
    tab.T = Matrix::Zero(m, ncols + 1);
    tab.basis.resize(m);
    int art = n + m;
    for (int i = 0; i < m; ++i) {
        double sign = b(i) < 0.0 ? -1.0 : 1.0;
        tab.T.block(i, 0, 1, n) = sign * A.row(i);
        tab.T(i, n + i) = sign;
        tab.T(i, ncols) = sign * b(i);
        if (b(i) < 0.0) {
            tab.T(i, art) = 1.0;
            tab.basis[i] = art++;
        } else {
            tab.basis[i] = n + i;
        }
    }

    std::vector<char> allowed(ncols, 1);
    if (nart > 0) {
        Vector phase1 = Vector::Zero(ncols);
        for (int j = n + m; j < ncols; ++j) phase1(j) = -1.0;
        if (tab.run(phase1, allowed) != LpStatus::optimal)
            return {LpStatus::infeasible, 0.0, Vector()};
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (tab.basis[i] >= n + m) infeas += tab.T(i, ncols);
        if (infeas > 1e-7) return {LpStatus::infeasible, 0.0, Vector()};
        // Drive any zero-level artificials out of the basis.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < n + m) continue;
            int col = -1;
            for (int j = 0; j < n + m && col < 0; ++j)
                if (std::abs(tab.T(i, j)) > kTol) col = j;
            if (col >= 0) tab.pivot(i, col);
        }
        for (int j = n + m; j < ncols; ++j) allowed[j] = 0;
    }

    Vector cost = Vector::Zero(ncols);
    cost.head(n) = c;
    LpStatus st = tab.run(cost, allowed);
    if (st != LpStatus::optimal) return {st, 0.0, Vector()};

    Vector x = Vector::Zero(n);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n) x(tab.basis[i]) = tab.T(i, ncols);
    return {LpStatus::optimal, c.dot(x), x};
}

}  // namespace curvflow
