#include "cbqr/minimizer.hpp"

#include <cmath>

#include "cbqr/errors.hpp"

namespace cbqr {

Vector feedback_gradient_row(const Vector& xi, const Matrix& p_mat,
                             const Vector& p_vec,
                             const BilinearDynamics& dynamics, double t) {
  if (static_cast<int>(xi.size()) != dynamics.n ||
      p_mat.rows() != dynamics.n || p_mat.cols() != dynamics.n ||
      p_vec.size() != xi.size()) {
    throw DimensionError("feedback_gradient_row: dimension mismatch");
  }
  // q_x = xi^T P + p^T  (P symmetric, so P^T xi == P xi)
  Vector qx = matvec_transposed(p_mat, xi);
  for (std::size_t i = 0; i < qx.size(); ++i) {
    qx[i] += p_vec[i];
  }
  Matrix bm = dynamics.B(t);
  const Matrix m = control_matrix(xi, dynamics, t);
  for (std::size_t z = 0; z < bm.size(); ++z) {
    bm.data()[z] += m.data()[z];
  }
  return matvec_transposed(bm, qx);
}

namespace {

double phi_value(const Vector& nu, const Matrix& rt, const Vector& y) {
  return 0.5 * quad_form(rt, nu) + dot(y, nu);
}

bool is_diagonal(const Matrix& m) {
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != 0.0) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

Vector argmin_control(const Vector& y, const Matrix& rt, const AdmissibleSet& set) {
  const int nu = set.dim();
  if (static_cast<int>(y.size()) != nu || rt.rows() != nu || rt.cols() != nu) {
    throw DimensionError("argmin_control: dimension mismatch");
  }

  switch (set.kind()) {
    case AdmissibleSet::Kind::kFiniteSet: {
      // Table search over the admissible points.
      std::size_t best = 0;
      double best_phi = phi_value(set.points()[0], rt, y);
      for (std::size_t i = 1; i < set.points().size(); ++i) {
        const double phi = phi_value(set.points()[i], rt, y);
        if (phi < best_phi) {
          best_phi = phi;
          best = i;
        }
      }
      return set.points()[best];
    }

    case AdmissibleSet::Kind::kUnconstrained: {
      const Vector eig = sym_eigenvalues(rt);
      const double scale = std::abs(eig.back()) > std::abs(eig.front())
                               ? std::abs(eig.back())
                               : std::abs(eig.front());
      if (!(eig.front() > 1e-10 * scale)) {
        throw UnboundedObjective(
            "argmin_control: unconstrained minimization needs positive definite R");
      }
      Vector rhs(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        rhs[i] = -y[i];
      }
      return solve_linear(rt, rhs);
    }

    case AdmissibleSet::Kind::kBox: {
      if (!is_diagonal(rt)) {
        throw UnsupportedSet("argmin_control: box set requires a diagonal R");
      }
      Vector out(y.size());
      for (int i = 0; i < nu; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double r = rt(i, i);
        const double lo = set.lo()[k];
        const double hi = set.hi()[k];
        if (r > 0.0) {
          const double stat = -y[k] / r;
          out[k] = stat < lo ? lo : (stat > hi ? hi : stat);
        } else {
          // Linear channel: pick the bound the slope points away from.
          out[k] = y[k] > 0.0 ? lo : (y[k] < 0.0 ? hi : lo);
        }
      }
      return out;
    }
  }
  throw UnsupportedSet("argmin_control: unknown set kind");
}

}  // namespace cbqr
