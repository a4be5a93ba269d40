#pragma once

#include "curvflow/common.hpp"

namespace curvflow {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status;
    double value = 0.0;
    Vector x;
};

// Dense two-phase simplex for  max c^T x  s.t.  A x <= b,  x >= 0.
// b may have negative entries. Bland's rule, so it terminates on
// degenerate instances; intended for small dense problems.
LpResult simplex_solve(const Vector& c, const Matrix& A, const Vector& b);

}  // namespace curvflow
