#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cbqr/integrate.hpp"
#include "cbqr/model.hpp"

namespace cbqr {

struct SolveOptions {
  /// Stopping tolerance on |J_k - J_{k+1}|. When unset, resolved inside
  /// solve() to 1e-4 * max(J0, 1).
  std::optional<double> epsilon;
  int max_iterations = 100;
  /// Constant admissible control used for the initial process.
  Vector initial_control;
};

/// Zero when admissible; the first finite-set point or the componentwise
/// clamp of zero into a box otherwise.
Vector default_initial_control(const AdmissibleSet& set);

SolveOptions default_options(const BilinearProblem& problem);

enum class Termination {
  kConverged,      // |J_k - J_{k+1}| < epsilon
  kMaxIterations,  // iteration cap reached
  kDiverged,       // an improvement pass failed to integrate
  kCostIncreased,  // J rose beyond numerical noise; loop stopped, no rollback
};

const char* termination_name(Termination t);

struct SolveReport {
  std::vector<double> costs;  // J_0, J_1, ...
  std::optional<Process> final_process;
  std::optional<ValueCoefficients> final_value;
  int iterations_run = 0;
  Termination termination = Termination::kMaxIterations;
  /// Iteration index k at which J_k - J_{k-1} exceeded the noise threshold
  /// (only for kCostIncreased).
  int increase_step = -1;
  double epsilon_used = 0.0;
};

/// Simulates the constant initial control forward and solves the value
/// equations for the resulting control trajectory.
std::pair<Process, ValueCoefficients> initial_process(const BilinearProblem& problem,
                                                      const SolveOptions& opts);

/// One successive-improvement pass: build the pointwise-minimizing feedback
/// from the node values of (P, p), simulate it forward, and recompute the
/// value coefficients for the new control.
std::pair<Process, ValueCoefficients> improve(const BilinearProblem& problem,
                                              const ValueCoefficients& value);

/// Full loop: initial process, then improvements until |dJ| < epsilon, the
/// iteration cap, an integration failure, or a beyond-noise cost increase.
SolveReport solve(const BilinearProblem& problem, const SolveOptions& opts);

/// s(t, xi, nu) = l(t, xi, nu) + q_t(t, xi) + q_x(t, xi) f(t, xi, nu), with
/// q_t evaluated by substituting the analytic right-hand sides of the value
/// ODEs (never finite differences). (p_mat, p_vec) are the value-coefficient
/// node values at t, and u_value is the control the value solution was
/// computed for at t; it enters only those substituted derivatives.
double eval_s(double t, const Vector& xi, const Vector& nu, const Matrix& p_mat,
              const Vector& p_vec, const Vector& u_value,
              const BilinearProblem& problem);

/// s_f(xi) = xi^T H xi / 2 - q(tf, xi)
double eval_s_f(const Vector& xi, const Matrix& h, const Matrix& p_terminal,
                const Vector& p_vec_terminal);

/// Alternative cost route: q(0, x(0)) plus the backward-RK4 integral of
/// p^T (B u + g) + u^T R u / 2 under the same hold convention.
double eval_cost_equivalent(const BilinearProblem& problem, const Process& process,
                            const ValueCoefficients& value);

}  // namespace cbqr
