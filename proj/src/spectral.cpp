#include "curvflow/spectral.hpp"

#include <cmath>

namespace curvflow {

namespace {

constexpr double kPowerTol = 1e-12;
constexpr long kPowerCap = 1000000;
constexpr double kResidualTol = 1e-10;

// Solve m(W - I) = 0, sum(m) = 1 directly as an overdetermined system.
Vector perron_fallback(const Matrix& W) {
    int n = static_cast<int>(W.rows());
    Matrix A(n + 1, n);
    A.topRows(n) = W.transpose() - Matrix::Identity(n, n);
    A.bottomRows(1).setOnes();
    Vector b = Vector::Zero(n + 1);
    b(n) = 1.0;
    return A.colPivHouseholderQr().solve(b);
}

}  // namespace

PerronResult perron_measure(const Matrix& W) {
    int n = static_cast<int>(W.rows());
    if (W.cols() != n) throw Error("spectral: random-walk matrix must be square");
    for (int i = 0; i < n; ++i)
        if (std::abs(W.row(i).sum() - 1.0) > 1e-9)
            throw Error("spectral: random-walk matrix is not row-stochastic");

    // Lazy walk has the same stationary vector and no periodicity issues.
    Matrix L = 0.5 * (Matrix::Identity(n, n) + W);
    Vector m = Vector::Constant(n, 1.0 / n);
    bool converged = false;
    for (long it = 0; it < kPowerCap; ++it) {
        Vector next = L.transpose() * m;
        next /= next.sum();
        double delta = (next - m).cwiseAbs().maxCoeff();
        m = next;
        if (delta <= kPowerTol) {
            converged = true;
            break;
        }
    }
    double residual = (W.transpose() * m - m).cwiseAbs().maxCoeff();
    if (!converged || residual > kResidualTol) {
        m = perron_fallback(W);
        double s = m.sum();
        if (std::abs(s) < 1e-300) throw Error("spectral: singular stationary system");
        m /= s;
        residual = (W.transpose() * m - m).cwiseAbs().maxCoeff();
    }
    if (residual > kResidualTol) throw Error("spectral: stationary solve did not converge");
    for (int i = 0; i < n; ++i)
        if (!(m(i) > 0.0))
            throw Error("spectral: Perron measure not strictly positive (vertex " +
                        std::to_string(i) + ")");
    return {m, residual};
}

PerronKernel mean_transition_kernel(const DirectedWeightedGraph& g) {
    assert_strongly_connected(g);
    PerronKernel k;
    k.W = random_walk_matrix(g);
    auto pr = perron_measure(k.W);
    k.m = pr.m;
    k.residual = pr.residual;
    int n = g.n();
    k.mu = Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            k.mu(x, y) = 0.5 * (k.W(x, y) + (k.m(y) / k.m(x)) * k.W(y, x));
        }
    return k;
}

Matrix idle_kernel(const PerronKernel& k, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) throw Error("spectral: alpha must be in (0, 1]");
    int n = static_cast<int>(k.mu.rows());
    Matrix out = alpha * k.mu;
    for (int i = 0; i < n; ++i) out(i, i) = 1.0 - alpha;
    return out;
}

}  // namespace curvflow
