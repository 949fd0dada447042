#pragma once

#include "cbqr/linalg.hpp"
#include "cbqr/model.hpp"

namespace cbqr {

/// Row vector y = (xi^T P + p^T)(B(t) + M(t, xi)) driving the pointwise
/// control minimization; M's column i is N_i(t) xi.
Vector feedback_gradient_row(const Vector& xi, const Matrix& p_mat,
                             const Vector& p_vec,
                             const BilinearDynamics& dynamics, double t);

/// Global minimizer of phi(nu) = nu^T Rt nu / 2 + y . nu over the set.
///
///  - finite set: exhaustive evaluation, ties broken by lowest point index
///  - unconstrained: requires Rt positive definite (min eig > 1e-10 |Rt|),
///    returns -Rt^{-1} y^T; throws UnboundedObjective otherwise
///  - box: requires Rt diagonal; componentwise clamp of -y_i / r_i, with the
///    r_i = 0 channel resolved by the sign of y_i (lo on ties); throws
///    UnsupportedSet for non-diagonal Rt
Vector argmin_control(const Vector& y, const Matrix& rt, const AdmissibleSet& set);

}  // namespace cbqr
