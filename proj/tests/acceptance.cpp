// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities. Criteria c1 and c3 are implemented
// exactly as stated and are expected to fail on mathematical grounds; the
// paired c1b/c3b cases check the attainable form of the same property.
#include "doctest.h"

#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "cbqr/bench.hpp"
#include "cbqr/krotov.hpp"
#include "test_support.hpp"

using namespace cbqr;
using namespace cbqr::bench;
using cbqr::testing::Rng;

namespace {

void report(const char* criterion, bool ok, const char* detail_fmt = nullptr, ...) {
  std::printf("%s: %s", criterion, ok ? "PASS" : "FAIL");
  if (detail_fmt != nullptr) {
    std::printf("  [");
    va_list args;
    va_start(args, detail_fmt);
    std::vprintf(detail_fmt, args);
    va_end(args);
    std::printf("]");
  }
  std::printf("\n");
  std::fflush(stdout);
}

bool nonincreasing(const std::vector<double>& costs, double slack) {
  for (std::size_t k = 0; k + 1 < costs.size(); ++k) {
    if (costs[k + 1] > costs[k] + slack) {
      return false;
    }
  }
  return true;
}

SolveOptions fifteen_iterations(const BilinearProblem& pb) {
  SolveOptions opts = default_options(pb);
  opts.epsilon = 1e-9;
  opts.max_iterations = 15;
  return opts;
}

const BilinearProblem& savs_problem() {
  static const BilinearProblem pb = build_savs_problem();
  return pb;
}

const SolveReport& savs_run() {
  static const SolveReport report = solve(savs_problem(), fifteen_iterations(savs_problem()));
  return report;
}

const std::pair<Process, ValueCoefficients>& savs_initial() {
  static const auto initial =
      initial_process(savs_problem(), default_options(savs_problem()));
  return initial;
}

struct OracleComparison {
  double p_mat_err = 0.0;   // node-wise value-coefficient mismatch, relative
  double p_vec_err = 0.0;
  double costate_err = 0.0; // (P x + p) mismatch along the converged trajectory
  double gain_err = 0.0;    // feedback values along the trajectory
  double cost_err = 0.0;    // converged J vs simulated oracle cost
};

OracleComparison compare_with_riccati(const BilinearProblem& pb) {
  SolveOptions opts = default_options(pb);
  opts.epsilon = 1e-12;
  opts.max_iterations = 200;
  const SolveReport run = solve(pb, opts);
  REQUIRE(run.termination == Termination::kConverged);
  const ValueCoefficients& krotov = *run.final_value;
  const Process& process = *run.final_process;
  const ValueCoefficients oracle = riccati_oracle(pb);

  OracleComparison cmp;
  double p_mat_scale = 0.0;
  double p_vec_scale = 0.0;
  double lambda_scale = 0.0;
  double u_scale = 0.0;
  for (int j = 0; j < pb.grid.nodes(); ++j) {
    const std::size_t k = static_cast<std::size_t>(j);
    p_mat_scale = std::max(p_mat_scale, norm_inf(oracle.P[k]));
    p_vec_scale = std::max(p_vec_scale, norm_inf(oracle.p[k]));
    Vector lam = oracle.P[k] * process.x.at(j);
    for (std::size_t i = 0; i < lam.size(); ++i) {
      lam[i] += oracle.p[k][i];
    }
    lambda_scale = std::max(lambda_scale, norm_inf(lam));
    u_scale = std::max(u_scale, norm_inf(process.u.at(j)));
  }

  for (int j = 0; j < pb.grid.nodes(); ++j) {
    const std::size_t k = static_cast<std::size_t>(j);
    const double t = pb.grid.node(j);
    cmp.p_mat_err = std::max(
        cmp.p_mat_err, norm_inf(krotov.P[k] - oracle.P[k]) / std::max(p_mat_scale, 1e-30));
    Vector dp(krotov.p[k].size());
    for (std::size_t i = 0; i < dp.size(); ++i) {
      dp[i] = krotov.p[k][i] - oracle.p[k][i];
    }
    cmp.p_vec_err =
        std::max(cmp.p_vec_err, norm_inf(dp) / std::max(p_vec_scale, 1e-30));

    Vector lam_k = krotov.P[k] * process.x.at(j);
    Vector lam_o = oracle.P[k] * process.x.at(j);
    for (std::size_t i = 0; i < lam_k.size(); ++i) {
      lam_k[i] += krotov.p[k][i];
      lam_o[i] += oracle.p[k][i];
    }
    Vector dl(lam_k.size());
    for (std::size_t i = 0; i < dl.size(); ++i) {
      dl[i] = lam_k[i] - lam_o[i];
    }
    cmp.costate_err =
        std::max(cmp.costate_err, norm_inf(dl) / (1.0 + lambda_scale));

    // Oracle feedback value at the converged state.
    const Matrix bt = pb.dynamics.B(t);
    Vector rhs = matvec_transposed(bt, lam_o);
    Vector u_oracle = solve_linear(pb.cost.R(t), rhs);
    for (double& v : u_oracle) {
      v = -v;
    }
    Vector du(u_oracle.size());
    for (std::size_t i = 0; i < du.size(); ++i) {
      du[i] = process.u.at(j)[i] - u_oracle[i];
    }
    cmp.gain_err = std::max(cmp.gain_err, norm_inf(du) / (1.0 + u_scale));
  }

  // Simulate the oracle feedback with the same integrator and hold.
  const Feedback oracle_fb = [&pb, &oracle](double t, const Vector& xi) {
    const int j = static_cast<int>(std::lround((t - pb.grid.t0()) / pb.grid.h()));
    const std::size_t k = static_cast<std::size_t>(j);
    Vector lam = oracle.P[k] * xi;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      lam[i] += oracle.p[k][i];
    }
    Vector rhs = matvec_transposed(pb.dynamics.B(t), lam);
    Vector u = solve_linear(pb.cost.R(t), rhs);
    for (double& v : u) {
      v = -v;
    }
    return u;
  };
  const ForwardResult oracle_run =
      simulate_forward(pb.dynamics, pb.cost, oracle_fb, pb.grid);
  cmp.cost_err = std::abs(process.cost - oracle_run.cost) /
                 std::max(std::abs(oracle_run.cost), 1e-30);
  return cmp;
}

}  // namespace

TEST_CASE("c1 monotone improvement at the pinned 5000-step grid") {
  const BilinearProblem pb = build_savs_problem(5000);
  const SolveReport run = solve(pb, fifteen_iterations(pb));
  const bool full_sequence = run.costs.size() == 16;
  const bool monotone =
      !run.costs.empty() &&
      nonincreasing(run.costs, 1e-6 * std::max(run.costs.front(), 1.0));
  const bool first_drop = run.costs.size() >= 2 && run.costs[1] < run.costs[0];
  const bool ok = full_sequence && monotone && first_drop;
  report("criterion 1 (savs, 5000 steps, 15 iterations, nonincreasing J)", ok,
         "termination=%s, costs recorded=%zu; the unlocked device mode "
         "(rate 5000/s) is outside the RK4 stability region at h=1e-3",
         termination_name(run.termination), run.costs.size());
  CHECK(ok);
}

TEST_CASE("c1b monotone improvement at the stable default grid") {
  const SolveReport& run = savs_run();
  const bool full_sequence = run.costs.size() == 16;
  const double slack = 1e-6 * std::max(run.costs.front(), 1.0);
  const bool monotone = nonincreasing(run.costs, slack);
  const bool first_drop = run.costs.size() >= 2 && run.costs[1] < run.costs[0];
  const bool ok = full_sequence && monotone && first_drop;
  report("criterion 1b (savs, 20000 steps, 15 iterations, nonincreasing J)", ok,
         "J0=%.6g, J15=%.6g, slack=%.3g", run.costs.front(), run.costs.back(), slack);
  CHECK(ok);
}

TEST_CASE("c2 switching exclusivity of the converged savs control") {
  const SolveReport& run = savs_run();
  REQUIRE(run.final_process.has_value());
  const Process& process = *run.final_process;
  int admissible = 0;
  int exclusive = 0;
  const int nodes = process.u.nodes();
  for (int j = 0; j < nodes; ++j) {
    const Vector& u = process.u.at(j);
    admissible += savs_problem().set.contains(u) ? 1 : 0;
    exclusive += (u[0] * u[1] == 0.0) ? 1 : 0;
  }
  const bool ok = admissible == nodes && exclusive == nodes;
  report("criterion 2 (u1*u2 = 0 and pattern membership at every node)", ok,
         "%d/%d admissible, %d/%d exclusive", admissible, nodes, exclusive, nodes);
  CHECK(ok);
}

// The zero-order hold biases the converged control by O(h), so the oracle
// comparisons run on grids fine enough to push that bias below the 1e-4
// tolerance (h = 2.5e-4 on both problems).
constexpr int kScalarOracleSteps = 4000;
constexpr int kLinearOracleSteps = 8000;

TEST_CASE("c3 lqr oracle equivalence (literal value-coefficient match)") {
  const OracleComparison scalar =
      compare_with_riccati(build_scalar_analytic(kScalarOracleSteps));
  const OracleComparison linear =
      compare_with_riccati(build_linear_oracle(kLinearOracleSteps));
  const bool coeffs_ok = scalar.p_mat_err <= 1e-4 && scalar.p_vec_err <= 1e-4 &&
                         linear.p_mat_err <= 1e-4 && linear.p_vec_err <= 1e-4;
  const bool cost_ok = scalar.cost_err <= 1e-4 && linear.cost_err <= 1e-4;
  const bool ok = coeffs_ok && cost_ok;
  report("criterion 3 (Krotov P,p vs Riccati, 1e-4 node-wise; J vs oracle)", ok,
         "P err: scalar %.3g, 4-state %.3g; p err: %.3g, %.3g; J err: %.3g, %.3g. "
         "The improving-function coefficients solve a Lyapunov equation, not the "
         "Riccati equation; they differ as functions even at the optimum",
         scalar.p_mat_err, linear.p_mat_err, scalar.p_vec_err, linear.p_vec_err,
         scalar.cost_err, linear.cost_err);
  CHECK(ok);
}

TEST_CASE("c3b lqr oracle equivalence (costate and gains and cost)") {
  const OracleComparison scalar =
      compare_with_riccati(build_scalar_analytic(kScalarOracleSteps));
  const OracleComparison linear =
      compare_with_riccati(build_linear_oracle(kLinearOracleSteps));
  const bool ok = scalar.costate_err <= 1e-4 && linear.costate_err <= 1e-4 &&
                  scalar.gain_err <= 1e-4 && linear.gain_err <= 1e-4 &&
                  scalar.cost_err <= 1e-4 && linear.cost_err <= 1e-4;
  report("criterion 3b (P x + p and feedback values along the optimum, J)", ok,
         "costate err: scalar %.3g, 4-state %.3g; gain err: %.3g, %.3g; "
         "J err: %.3g, %.3g",
         scalar.costate_err, linear.costate_err, scalar.gain_err, linear.gain_err,
         scalar.cost_err, linear.cost_err);
  CHECK(ok);
}

TEST_CASE("c4 s-independence on the savs initial process") {
  const auto& [process, value] = savs_initial();
  const BilinearProblem& pb = savs_problem();

  Vector rms(6, 0.0);
  for (int j = 0; j < process.x.nodes(); ++j) {
    for (int i = 0; i < 6; ++i) {
      rms[static_cast<std::size_t>(i)] +=
          process.x.at(j)[static_cast<std::size_t>(i)] *
          process.x.at(j)[static_cast<std::size_t>(i)];
    }
  }
  for (double& v : rms) {
    v = std::sqrt(v / process.x.nodes()) + 1e-9;
  }

  Rng rng(77);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const int j = 1 + rng.index(pb.grid.steps() - 1);
    const std::size_t k = static_cast<std::size_t>(j);
    const double t = pb.grid.node(j);
    const Vector& u = process.u.at(j);
    const double s_on = eval_s(t, process.x.at(j), u, value.P[k], value.p[k], u, pb);
    for (int rep = 0; rep < 100; ++rep) {
      Vector xi = process.x.at(j);
      for (std::size_t i = 0; i < xi.size(); ++i) {
        xi[i] += rms[i] * rng.uniform();
      }
      const double s_off = eval_s(t, xi, u, value.P[k], value.p[k], u, pb);
      worst = std::max(worst, std::abs(s_off - s_on) / (1.0 + std::abs(s_on)));
    }
  }
  const bool ok = worst <= 1e-6;
  report("criterion 4 (s constant in the state argument, 2000 samples)", ok,
         "worst relative deviation %.3g (tol 1e-6)", worst);
  CHECK(ok);
}

TEST_CASE("c5 equivalent cost at convergence on every bundled problem") {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"scalar", "lqr-oracle", "savs"}) {
    const BilinearProblem pb = *build_builtin(name, std::nullopt);
    SolveOptions opts = default_options(pb);
    if (std::string(name) == "savs") {
      opts = fifteen_iterations(pb);
    } else {
      opts.epsilon = 1e-10;
      opts.max_iterations = 200;
    }
    const SolveReport run = solve(pb, opts);
    REQUIRE(run.final_process.has_value());
    const double j = run.final_process->cost;
    const double jeq = eval_cost_equivalent(pb, *run.final_process, *run.final_value);
    const double err = std::abs(j - jeq) / std::max(std::abs(j), 1.0);
    worst = std::max(worst, err);
    ok = ok && err <= 1e-3;
  }
  report("criterion 5 (|J - J_eq| <= 1e-3 max(J,1), all bundled problems)", ok,
         "worst relative gap %.3g", worst);
  CHECK(ok);
}

TEST_CASE("c6 terminal function vanishes with terminal value data") {
  const Matrix& h = savs_problem().cost.H;
  Rng rng(78);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    Vector xi(6);
    for (double& v : xi) {
      v = 1e6 * rng.uniform();  // exercise the benchmark's force scale
    }
    const double sf = eval_s_f(xi, h, h, Vector(6, 0.0));
    const double lf = 0.5 * quad_form(h, xi);
    worst = std::max(worst, std::abs(sf) / std::max(1.0, std::abs(lf)));
  }
  const bool ok = worst <= 1e-12;
  report("criterion 6 (s_f = 0 for 100 random states)", ok,
         "worst relative residual %.3g", worst);
  CHECK(ok);
}

TEST_CASE("c7 integrator order on the scalar problem") {
  std::vector<double> errors;
  for (int steps : {25, 50, 100, 200}) {
    const BilinearProblem pb = build_scalar_analytic(steps);
    const Feedback zero = [](double, const Vector&) { return Vector{0.0}; };
    const ForwardResult res = simulate_forward(pb.dynamics, pb.cost, zero, pb.grid);
    double err = 0.0;
    for (int j = 0; j <= steps; ++j) {
      err = std::max(err, std::abs(res.x.at(j)[0] - std::exp(-pb.grid.node(j))));
    }
    errors.push_back(err);
  }
  bool ok = true;
  double r0 = errors[0] / errors[1];
  double r1 = errors[1] / errors[2];
  double r2 = errors[2] / errors[3];
  for (double r : {r0, r1, r2}) {
    ok = ok && r >= 12.0 && r <= 20.0;
  }
  report("criterion 7 (error ratio per step halving in [12,20], 3 halvings)", ok,
         "ratios %.2f, %.2f, %.2f", r0, r1, r2);
  CHECK(ok);
}

TEST_CASE("c8 vibration reduction on the converged savs process") {
  const SolveReport& run = savs_run();
  REQUIRE(run.final_process.has_value());
  const Process& baseline = savs_initial().first;
  const BilinearProblem& pb = savs_problem();

  const int j2 = static_cast<int>(std::lround((2.0 - pb.grid.t0()) / pb.grid.h()));
  double peak_baseline = 0.0;
  double peak_controlled = 0.0;
  for (int j = j2; j < pb.grid.nodes(); ++j) {
    peak_baseline = std::max(peak_baseline, std::abs(baseline.x.at(j)[0]));
    peak_controlled =
        std::max(peak_controlled, std::abs(run.final_process->x.at(j)[0]));
  }
  const bool ok =
      run.costs.back() < baseline.cost && peak_controlled < peak_baseline;
  report("criterion 8 (J_final < J0 and smaller peak |x1| over [2,5] s)", ok,
         "J: %.6g -> %.6g; peak|x1|: %.4g -> %.4g", baseline.cost, run.costs.back(),
         peak_baseline, peak_controlled);
  CHECK(ok);
}
