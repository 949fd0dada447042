#include "cbqr/integrate.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace cbqr {
namespace {

constexpr double kDivergenceCap = 1e12;

double dot_raw(std::size_t n, const double* a, const double* b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

bool finite_raw(std::size_t n, const double* a) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(a[i])) {
      return false;
    }
  }
  return true;
}

double max_abs_raw(std::size_t n, const double* a) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::abs(a[i]));
  }
  return m;
}

struct Rk4Buffers {
  explicit Rk4Buffers(std::size_t d) : k1(d), k2(d), k3(d), k4(d), stage(d) {}
  Vector k1, k2, k3, k4, stage;
};

// F: void(double t, const double* y, double* dy)
template <class F>
void rk4_step_raw(F&& f, double t, const double* y, double h, std::size_t d,
                  Rk4Buffers& b, double* out) {
  const auto& K = kernels::active();
  f(t, y, b.k1.data());
  K.add_scaled(d, y, 0.5 * h, b.k1.data(), b.stage.data());
  f(t + 0.5 * h, b.stage.data(), b.k2.data());
  K.add_scaled(d, y, 0.5 * h, b.k2.data(), b.stage.data());
  f(t + 0.5 * h, b.stage.data(), b.k3.data());
  K.add_scaled(d, y, h, b.k3.data(), b.stage.data());
  f(t + h, b.stage.data(), b.k4.data());
  K.rk4_combine(d, y, h / 6.0, b.k1.data(), b.k2.data(), b.k3.data(),
                b.k4.data(), out);
}

// Workspace for evaluating the bilinear right-hand side without allocating.
struct DynamicsEval {
  DynamicsEval(const BilinearDynamics& dyn, const QuadraticCost& cost)
      : dynamics(dyn), quad(cost), f_mat(dyn.n, dyn.n), n_scratch(dyn.n, dyn.n),
        b_mat(dyn.n, dyn.nu), g_mat(dyn.n, 1), q_mat(dyn.n, dyn.n),
        r_mat(dyn.nu, dyn.nu), tmp_n(static_cast<std::size_t>(dyn.n)),
        tmp_nu(static_cast<std::size_t>(dyn.nu)) {}

  // F(t) = A(t) + {uN}(t) into f_mat; B, g into their slots.
  void load(double t, const double* u) {
    dynamics.A.eval_into(t, f_mat);
    for (int i = 0; i < dynamics.nu; ++i) {
      const double ui = u[static_cast<std::size_t>(i)];
      if (ui == 0.0) {
        continue;
      }
      dynamics.Ns[static_cast<std::size_t>(i)].eval_into(t, n_scratch);
      kernels::active().axpy(f_mat.size(), ui, n_scratch.data(), f_mat.data());
    }
    dynamics.B.eval_into(t, b_mat);
    dynamics.g.eval_into(t, g_mat);
  }

  // dx = F x + B u + g  (load() must have run for this t, u)
  void state_rhs(const double* x, const double* u, double* dx) {
    matvec_into(f_mat, x, dx);
    matvec_into(b_mat, u, tmp_n.data());
    const std::size_t n = static_cast<std::size_t>(dynamics.n);
    for (std::size_t i = 0; i < n; ++i) {
      dx[i] += tmp_n[i] + g_mat.data()[i];
    }
  }

  // (x^T Q x + u^T R u) / 2 at time t
  double running_cost(double t, const double* x, const double* u) {
    quad.Q.eval_into(t, q_mat);
    quad.R.eval_into(t, r_mat);
    matvec_into(q_mat, x, tmp_n.data());
    double c = dot_raw(static_cast<std::size_t>(dynamics.n), x, tmp_n.data());
    matvec_into(r_mat, u, tmp_nu.data());
    c += dot_raw(static_cast<std::size_t>(dynamics.nu), u, tmp_nu.data());
    return 0.5 * c;
  }

  const BilinearDynamics& dynamics;
  const QuadraticCost& quad;
  Matrix f_mat, n_scratch, b_mat, g_mat, q_mat, r_mat;
  Vector tmp_n, tmp_nu;
};

}  // namespace

ForwardResult simulate_forward(const BilinearDynamics& dynamics,
                               const QuadraticCost& cost, const Feedback& fb,
                               const TimeGrid& grid) {
  const int n = dynamics.n;
  const std::size_t d = static_cast<std::size_t>(n) + 1;  // state + running cost

  ForwardResult out;
  out.x = Trajectory(n, grid.nodes());
  out.u = Trajectory(dynamics.nu, grid.nodes());
  out.x.at(0) = dynamics.x0;

  DynamicsEval eval(dynamics, cost);
  Rk4Buffers buffers(d);
  Vector y(d, 0.0);
  Vector y_next(d, 0.0);
  std::memcpy(y.data(), dynamics.x0.data(), sizeof(double) * static_cast<std::size_t>(n));

  for (int j = 0; j < grid.steps(); ++j) {
    const double t = grid.node(j);
    const Vector u = fb(t, out.x.at(j));
    if (static_cast<int>(u.size()) != dynamics.nu || !all_finite(u)) {
      throw DimensionError("simulate_forward: feedback returned a bad control");
    }
    out.u.at(j) = u;

    auto f = [&](double tt, const double* yy, double* dy) {
      eval.load(tt, u.data());
      eval.state_rhs(yy, u.data(), dy);
      dy[n] = eval.running_cost(tt, yy, u.data());
    };
    rk4_step_raw(f, t, y.data(), grid.h(), d, buffers, y_next.data());
    std::swap(y, y_next);

    const double amp = max_abs_raw(static_cast<std::size_t>(n), y.data());
    if (!(amp <= kDivergenceCap) || !finite_raw(d, y.data())) {
      throw IntegrationDiverged(
          "simulate_forward: state diverged at step " + std::to_string(j),
          grid.node(j + 1), j);
    }
    std::memcpy(out.x.at(j + 1).data(), y.data(), sizeof(double) * static_cast<std::size_t>(n));
  }
  out.u.at(grid.steps()) = out.u.at(grid.steps() - 1);

  const double terminal = 0.5 * quad_form(cost.H, out.x.at(grid.steps()));
  out.cost = y[static_cast<std::size_t>(n)] + terminal;
  return out;
}

namespace {

// Shared backward pass; when `integral` is non-null, the running integral of
// p^T (B u + g) + u^T R u / 2 rides along as one extra state.
ValueCoefficients value_backward_impl(const BilinearDynamics& dynamics,
                                      const QuadraticCost& cost,
                                      const Trajectory& u, const TimeGrid& grid,
                                      double* integral) {
  const int n = dynamics.n;
  if (u.nodes() != grid.nodes() || u.dim() != dynamics.nu) {
    throw DimensionError("solve_value_backward: control not aligned to grid");
  }

  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t d = nn + static_cast<std::size_t>(n) + (integral != nullptr ? 1 : 0);

  ValueCoefficients vc;
  vc.P.assign(static_cast<std::size_t>(grid.nodes()), Matrix(n, n));
  vc.p.assign(static_cast<std::size_t>(grid.nodes()), Vector(static_cast<std::size_t>(n), 0.0));
  vc.P[static_cast<std::size_t>(grid.steps())] = cost.H;  // exact terminal condition

  DynamicsEval eval(dynamics, cost);
  Rk4Buffers buffers(d);
  Vector y(d, 0.0);
  Vector y_next(d, 0.0);
  std::memcpy(y.data(), cost.H.data(), sizeof(double) * nn);

  Matrix p_view(n, n);
  Matrix pf(n, n);
  Vector bu_g(static_cast<std::size_t>(n));
  Vector pvec(static_cast<std::size_t>(n));
  Vector ftp(static_cast<std::size_t>(n));
  Vector pbu(static_cast<std::size_t>(n));

  for (int j = grid.steps() - 1; j >= 0; --j) {
    const Vector& uj = u.at(j);

    auto f = [&](double tt, const double* yy, double* dy) {
      eval.load(tt, uj.data());
      // P block. p_view/pf borrow the workspace matrices for this stage.
      std::memcpy(p_view.data(), yy, sizeof(double) * nn);
      matmul_into(p_view, eval.f_mat, pf);
      eval.quad.Q.eval_into(tt, eval.q_mat);
      for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
          // P symmetric, so F^T P = (P F)^T elementwise.
          dy[static_cast<std::size_t>(r) + static_cast<std::size_t>(c) * n] =
              -pf(r, c) - pf(c, r) - eval.q_mat(r, c);
        }
      }
      // p block: dp = -F^T p - P (B u + g)
      const double* p_raw = yy + nn;
      matvec_into(eval.b_mat, uj.data(), bu_g.data());
      for (int i = 0; i < n; ++i) {
        bu_g[static_cast<std::size_t>(i)] += eval.g_mat.data()[i];
      }
      matvec_transposed_into(eval.f_mat, p_raw, ftp.data());
      matvec_into(p_view, bu_g.data(), pbu.data());
      for (int i = 0; i < n; ++i) {
        dy[nn + static_cast<std::size_t>(i)] =
            -ftp[static_cast<std::size_t>(i)] - pbu[static_cast<std::size_t>(i)];
      }
      if (integral != nullptr) {
        eval.quad.R.eval_into(tt, eval.r_mat);
        matvec_into(eval.r_mat, uj.data(), eval.tmp_nu.data());
        const double phi =
            dot_raw(static_cast<std::size_t>(n), p_raw, bu_g.data()) +
            0.5 * dot_raw(static_cast<std::size_t>(dynamics.nu), uj.data(),
                          eval.tmp_nu.data());
        dy[d - 1] = -phi;  // integrating backward accumulates +phi
      }
    };

    rk4_step_raw(f, grid.node(j + 1), y.data(), -grid.h(), d, buffers, y_next.data());
    std::swap(y, y_next);

    // No magnitude cap here: value-coefficient scales are problem-dependent
    // (curvatures can be enormous for stiff plants); only non-finite values
    // mean the integration broke down.
    if (!finite_raw(d, y.data())) {
      throw IntegrationDiverged(
          "solve_value_backward: coefficients diverged at step " + std::to_string(j),
          grid.node(j), j);
    }

    Matrix& pj = vc.P[static_cast<std::size_t>(j)];
    std::memcpy(pj.data(), y.data(), sizeof(double) * nn);
    symmetrize(pj);
    std::memcpy(y.data(), pj.data(), sizeof(double) * nn);
    std::memcpy(vc.p[static_cast<std::size_t>(j)].data(), y.data() + nn,
                sizeof(double) * static_cast<std::size_t>(n));
  }

  if (integral != nullptr) {
    *integral = y[d - 1];
  }
  return vc;
}

}  // namespace

ValueCoefficients solve_value_backward(const BilinearDynamics& dynamics,
                                       const QuadraticCost& cost,
                                       const Trajectory& u, const TimeGrid& grid) {
  return value_backward_impl(dynamics, cost, u, grid, nullptr);
}

ValueWithCostIntegral solve_value_backward_with_cost_integral(
    const BilinearDynamics& dynamics, const QuadraticCost& cost,
    const Trajectory& u, const TimeGrid& grid) {
  ValueWithCostIntegral out;
  out.value = value_backward_impl(dynamics, cost, u, grid, &out.integral);
  return out;
}

}  // namespace cbqr
