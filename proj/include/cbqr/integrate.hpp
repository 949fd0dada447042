#pragma once

#include <functional>
#include <vector>

#include "cbqr/errors.hpp"
#include "cbqr/kernels.hpp"
#include "cbqr/model.hpp"

namespace cbqr {

/// Node-aligned quadratic/linear coefficients P(t), p(t) of the improving
/// function q(t, xi) = xi^T P xi / 2 + p^T xi. Terminal node carries P = H
/// bit-exactly and p = 0 bit-exactly; every stored P sample is symmetric.
struct ValueCoefficients {
  std::vector<Matrix> P;
  std::vector<Vector> p;

  int nodes() const noexcept { return static_cast<int>(P.size()); }
};

/// Control law evaluated once per step at the step's left node.
using Feedback = std::function<Vector(double t, const Vector& xi)>;

/// Classical RK4 update y + (h/6)(k1 + 2 k2 + 2 k3 + k4). Negative h steps
/// backward in time. Throws IntegrationDiverged (carrying t) on a non-finite
/// stage derivative.
template <class F>
Vector rk4_step(F&& f, double t, const Vector& y, double h) {
  if (h == 0.0) {
    throw DimensionError("rk4_step: h must be nonzero");
  }
  const std::size_t d = y.size();
  const auto& K = kernels::active();
  auto checked = [d](Vector k) {
    if (k.size() != d) {
      throw DimensionError("rk4_step: field dimension mismatch");
    }
    return k;
  };
  Vector stage(d);
  const Vector k1 = checked(f(t, y));
  K.add_scaled(d, y.data(), 0.5 * h, k1.data(), stage.data());
  const Vector k2 = checked(f(t + 0.5 * h, stage));
  K.add_scaled(d, y.data(), 0.5 * h, k2.data(), stage.data());
  const Vector k3 = checked(f(t + 0.5 * h, stage));
  K.add_scaled(d, y.data(), h, k3.data(), stage.data());
  const Vector k4 = checked(f(t + h, stage));
  if (!all_finite(k1) || !all_finite(k2) || !all_finite(k3) || !all_finite(k4)) {
    throw IntegrationDiverged("rk4_step: non-finite stage derivative", t);
  }
  Vector out(d);
  K.rk4_combine(d, y.data(), h / 6.0, k1.data(), k2.data(), k3.data(),
                k4.data(), out.data());
  return out;
}

struct ForwardResult {
  Trajectory x;
  Trajectory u;
  double cost = 0.0;
};

/// Simulates x' = f(t, x, u) forward under `fb` with a zero-order hold per
/// step, integrating the running cost (x^T Q x + u^T R u)/2 as an augmented
/// scalar state in the same RK4 step. The returned cost includes the
/// terminal term x(tf)^T H x(tf) / 2. The control trajectory stores the held
/// value at each step's left node; the terminal node repeats the last one.
/// Throws IntegrationDiverged (with step index) when the state norm exceeds
/// 1e12 or turns non-finite.
ForwardResult simulate_forward(const BilinearDynamics& dynamics,
                               const QuadraticCost& cost, const Feedback& fb,
                               const TimeGrid& grid);

/// Integrates P' = -P F - F^T P - Q (P(tf) = H) and
/// p' = -F^T p - P (B u + g) (p(tf) = 0), F = A + {uN}, backward over the
/// grid with RK4, holding u at the left node of each interval (the same hold
/// the forward pass applies). P and p advance jointly; each stored P sample
/// is re-symmetrized.
ValueCoefficients solve_value_backward(const BilinearDynamics& dynamics,
                                       const QuadraticCost& cost,
                                       const Trajectory& u, const TimeGrid& grid);

struct ValueWithCostIntegral {
  ValueCoefficients value;
  /// Integral over [t0, tf] of p^T (B u + g) + u^T R u / 2, accumulated by
  /// the same backward RK4 pass as an extra scalar state.
  double integral = 0.0;
};

ValueWithCostIntegral solve_value_backward_with_cost_integral(
    const BilinearDynamics& dynamics, const QuadraticCost& cost,
    const Trajectory& u, const TimeGrid& grid);

}  // namespace cbqr
