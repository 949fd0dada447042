#include "cbqr/krotov.hpp"

#include <algorithm>
#include <cmath>

#include "cbqr/errors.hpp"
#include "cbqr/minimizer.hpp"

namespace cbqr {

Vector default_initial_control(const AdmissibleSet& set) {
  const Vector zero(static_cast<std::size_t>(set.dim()), 0.0);
  switch (set.kind()) {
    case AdmissibleSet::Kind::kUnconstrained:
      return zero;
    case AdmissibleSet::Kind::kFiniteSet:
      return set.contains(zero) ? zero : set.points().front();
    case AdmissibleSet::Kind::kBox: {
      Vector u = zero;
      for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::clamp(0.0, set.lo()[i], set.hi()[i]);
      }
      return u;
    }
  }
  return zero;
}

SolveOptions default_options(const BilinearProblem& problem) {
  SolveOptions opts;
  opts.initial_control = default_initial_control(problem.set);
  return opts;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxIterations:
      return "max-iterations";
    case Termination::kDiverged:
      return "diverged";
    case Termination::kCostIncreased:
      return "cost-increased";
  }
  return "?";
}

std::pair<Process, ValueCoefficients> initial_process(const BilinearProblem& problem,
                                                      const SolveOptions& opts) {
  if (!problem.set.contains(opts.initial_control)) {
    throw DimensionError("initial_process: initial control is not admissible");
  }
  const Vector u0 = opts.initial_control;
  const Feedback fb = [&u0](double, const Vector&) { return u0; };
  ForwardResult fwd = simulate_forward(problem.dynamics, problem.cost, fb, problem.grid);
  ValueCoefficients value =
      solve_value_backward(problem.dynamics, problem.cost, fwd.u, problem.grid);
  Process process(std::move(fwd.x), std::move(fwd.u), fwd.cost, problem.set);
  return {std::move(process), std::move(value)};
}

std::pair<Process, ValueCoefficients> improve(const BilinearProblem& problem,
                                              const ValueCoefficients& value) {
  if (value.nodes() != problem.grid.nodes()) {
    throw DimensionError("improve: value coefficients not aligned to grid");
  }
  const TimeGrid& grid = problem.grid;
  const Feedback fb = [&](double t, const Vector& xi) {
    // simulate_forward only queries node times; held across the step.
    const int j = static_cast<int>(std::lround((t - grid.t0()) / grid.h()));
    const Matrix& pj = value.P[static_cast<std::size_t>(j)];
    const Vector& pvj = value.p[static_cast<std::size_t>(j)];
    const Vector y = feedback_gradient_row(xi, pj, pvj, problem.dynamics, t);
    return argmin_control(y, problem.cost.R(t), problem.set);
  };
  ForwardResult fwd = simulate_forward(problem.dynamics, problem.cost, fb, grid);
  ValueCoefficients next =
      solve_value_backward(problem.dynamics, problem.cost, fwd.u, grid);
  Process process(std::move(fwd.x), std::move(fwd.u), fwd.cost, problem.set);
  return {std::move(process), std::move(next)};
}

SolveReport solve(const BilinearProblem& problem, const SolveOptions& opts) {
  if (opts.max_iterations < 1) {
    throw DimensionError("solve: max_iterations must be positive");
  }
  if (opts.epsilon && !(*opts.epsilon > 0.0)) {
    throw DimensionError("solve: epsilon must be positive");
  }

  SolveReport report;
  try {
    auto [process, value] = initial_process(problem, opts);
    report.costs.push_back(process.cost);
    report.final_process = std::move(process);
    report.final_value = std::move(value);
  } catch (const IntegrationDiverged&) {
    report.termination = Termination::kDiverged;
    return report;
  }

  const double j0 = report.costs.front();
  const double epsilon = opts.epsilon.value_or(1e-4 * std::max(j0, 1.0));
  // Slack for the monotonicity guarantee; increases below it are numerical
  // noise near an optimum, not a breakdown.
  const double noise = 1e-6 * std::max(j0, 1.0);
  report.epsilon_used = epsilon;
  report.termination = Termination::kMaxIterations;

  for (int k = 0; k < opts.max_iterations; ++k) {
    bool stop = false;
    try {
      auto next = improve(problem, *report.final_value);
      const double previous = report.costs.back();
      const double current = next.first.cost;
      report.costs.push_back(current);
      report.final_process = std::move(next.first);
      report.final_value = std::move(next.second);
      if (std::abs(previous - current) < epsilon) {
        report.termination = Termination::kConverged;
        stop = true;
      } else if (current - previous > noise) {
        report.termination = Termination::kCostIncreased;
        report.increase_step = static_cast<int>(report.costs.size()) - 1;
        stop = true;
      }
    } catch (const IntegrationDiverged&) {
      report.termination = Termination::kDiverged;
      stop = true;
    }
    if (stop) {
      break;
    }
  }
  report.iterations_run =
      report.costs.empty() ? 0 : static_cast<int>(report.costs.size()) - 1;
  return report;
}

double eval_s(double t, const Vector& xi, const Vector& nu, const Matrix& p_mat,
              const Vector& p_vec, const Vector& u_value,
              const BilinearProblem& problem) {
  const BilinearDynamics& dyn = problem.dynamics;
  const int n = dyn.n;
  if (static_cast<int>(xi.size()) != n || static_cast<int>(nu.size()) != dyn.nu ||
      p_mat.rows() != n || p_mat.cols() != n ||
      static_cast<int>(p_vec.size()) != n ||
      static_cast<int>(u_value.size()) != dyn.nu) {
    throw DimensionError("eval_s: dimension mismatch");
  }

  // F = A + {u_value N} at t.
  Matrix f_mat = dyn.A(t);
  {
    Matrix scratch;
    Matrix un;
    brace_uN_into(u_value, dyn, t, un, scratch);
    for (std::size_t z = 0; z < f_mat.size(); ++z) {
      f_mat.data()[z] += un.data()[z];
    }
  }
  const Matrix q_t_mat = problem.cost.Q(t);

  // Pdot = -P F - F^T P - Q, via (P F)^T = F^T P for symmetric P.
  const Matrix pf = matmul(p_mat, f_mat);
  Matrix pdot_mat(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      pdot_mat(r, c) = -pf(r, c) - pf(c, r) - q_t_mat(r, c);
    }
  }

  // pdot = -F^T p - P (B u_value + g)
  const Matrix b_mat = dyn.B(t);
  const Matrix g_mat = dyn.g(t);
  Vector bu_g = matvec(b_mat, u_value);
  for (int i = 0; i < n; ++i) {
    bu_g[static_cast<std::size_t>(i)] += g_mat(i, 0);
  }
  Vector pdot_vec = matvec_transposed(f_mat, p_vec);
  const Vector pbu = matvec(p_mat, bu_g);
  for (std::size_t i = 0; i < pdot_vec.size(); ++i) {
    pdot_vec[i] = -pdot_vec[i] - pbu[i];
  }

  const double q_t = 0.5 * quad_form(pdot_mat, xi) + dot(pdot_vec, xi);

  Vector q_x = matvec_transposed(p_mat, xi);
  for (std::size_t i = 0; i < q_x.size(); ++i) {
    q_x[i] += p_vec[i];
  }
  const Vector f = dynamics_rhs(t, xi, nu, dyn);
  const double l =
      0.5 * (quad_form(q_t_mat, xi) + quad_form(problem.cost.R(t), nu));
  return q_t + dot(q_x, f) + l;
}

double eval_s_f(const Vector& xi, const Matrix& h, const Matrix& p_terminal,
                const Vector& p_vec_terminal) {
  return 0.5 * quad_form(h, xi) - eval_q(p_terminal, p_vec_terminal, xi);
}

double eval_cost_equivalent(const BilinearProblem& problem, const Process& process,
                            const ValueCoefficients& value) {
  if (value.nodes() != problem.grid.nodes()) {
    throw DimensionError("eval_cost_equivalent: value not aligned to grid");
  }
  const ValueWithCostIntegral vi = solve_value_backward_with_cost_integral(
      problem.dynamics, problem.cost, process.u, problem.grid);
  return eval_q(value.P.front(), value.p.front(), process.x.at(0)) + vi.integral;
}

}  // namespace cbqr
