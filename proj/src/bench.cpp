#include "cbqr/bench.hpp"

#include <cmath>
#include <cstdint>
#include <random>

#include "cbqr/errors.hpp"

namespace cbqr::bench {
namespace {

CoefficientProvider zero_provider(int rows, int cols) {
  return CoefficientProvider::constant(Matrix(rows, cols));
}

}  // namespace

BilinearProblem build_savs_problem(int grid_steps) {
  using C = SavsConstants;
  const Matrix mass = Matrix::diagonal({C::kMass1, C::kMass2});
  const double ks = C::kStoryStiffness;
  const Matrix stiffness = Matrix::from_rows({{2.0 * ks, -ks}, {-ks, ks}});
  const Matrix damping =
      C::kDampingMassFactor * mass + C::kDampingStiffnessFactor * stiffness;
  const Matrix psi = Matrix::from_rows({{1.0, -1.0}, {0.0, 1.0}});

  // Block form: rows 0-1 displacement, 2-3 velocity, 4-5 device force.
  Matrix a(6, 6);
  a(0, 2) = 1.0;
  a(1, 3) = 1.0;
  const double minv[2] = {1.0 / C::kMass1, 1.0 / C::kMass2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      a(2 + i, j) = -minv[i] * stiffness(i, j);
      a(2 + i, 2 + j) = -minv[i] * damping(i, j);
      a(2 + i, 4 + j) = minv[i] * psi(i, j);
      // Force rate: w' = -k_device Psi^T z' (plus the unlocking decay in N).
      a(4 + i, 2 + j) = -C::kDeviceStiffness * psi(j, i);
    }
  }

  Matrix n1(6, 6);
  n1(5, 5) = -5000.0;
  Matrix n2(6, 6);
  n2(4, 4) = -5000.0;
  n2(5, 5) = -5000.0;

  Matrix g_amp(6, 1);
  g_amp(2, 0) = -C::kExcitationAmplitude;
  g_amp(3, 0) = -C::kExcitationAmplitude;

  BilinearDynamics dynamics(
      6, 2, CoefficientProvider::constant(a), zero_provider(6, 2),
      {CoefficientProvider::constant(n1), CoefficientProvider::constant(n2)},
      CoefficientProvider::sinusoid(g_amp, C::kExcitationOmega), Vector(6, 0.0));

  // Weights expand x1^2 1e5 + (x2 - x1)^2 1e5 + 5 (x5^2 + x6^2) and the
  // matching terminal form at 1e4 / 50.
  Matrix q(6, 6);
  q(0, 0) = 2e5;
  q(0, 1) = -1e5;
  q(1, 0) = -1e5;
  q(1, 1) = 1e5;
  q(4, 4) = 5.0;
  q(5, 5) = 5.0;
  Matrix h(6, 6);
  h(0, 0) = 2e4;
  h(0, 1) = -1e4;
  h(1, 0) = -1e4;
  h(1, 1) = 1e4;
  h(4, 4) = 50.0;
  h(5, 5) = 50.0;
  QuadraticCost cost(CoefficientProvider::constant(q), zero_provider(2, 2),
                     std::move(h));

  AdmissibleSet set = AdmissibleSet::finite_set(
      {Vector{0.0, 1.0}, Vector{1.0, 0.0}, Vector{0.0, 0.0}});

  return BilinearProblem(std::move(dynamics), std::move(cost), std::move(set),
                         TimeGrid(0.0, C::kHorizon, grid_steps));
}

BilinearProblem build_scalar_analytic(int grid_steps) {
  BilinearDynamics dynamics(
      1, 1, CoefficientProvider::constant(Matrix::from_rows({{-1.0}})),
      CoefficientProvider::constant(Matrix::from_rows({{1.0}})),
      {zero_provider(1, 1)}, zero_provider(1, 1), Vector{1.0});
  QuadraticCost cost(CoefficientProvider::constant(Matrix::from_rows({{1.0}})),
                     CoefficientProvider::constant(Matrix::from_rows({{1.0}})),
                     Matrix(1, 1));
  return BilinearProblem(std::move(dynamics), std::move(cost),
                         AdmissibleSet::unconstrained(1), TimeGrid(0.0, 1.0, grid_steps));
}

BilinearProblem build_linear_oracle(int grid_steps) {
  // Deterministic instance: mt19937_64 bits mapped to [-1, 1).
  std::mt19937_64 rng(0x5eed4c0ffeeULL);
  auto uniform = [&rng]() {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * unit - 1.0;
  };
  const int n = 4;
  const int nu = 2;

  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = uniform();
    }
  }
  for (int i = 0; i < n; ++i) {
    a(i, i) -= 1.0;  // keep the open loop mild over the horizon
  }
  Matrix b(n, nu);
  for (std::size_t z = 0; z < b.size(); ++z) {
    b.data()[z] = uniform();
  }
  Matrix gfac(n, n);
  for (std::size_t z = 0; z < gfac.size(); ++z) {
    gfac.data()[z] = uniform();
  }
  Matrix q = 0.5 * matmul(transpose(gfac), gfac);
  symmetrize(q);
  Matrix hfac(n, n);
  for (std::size_t z = 0; z < hfac.size(); ++z) {
    hfac.data()[z] = uniform();
  }
  Matrix h = 0.25 * matmul(transpose(hfac), hfac);
  symmetrize(h);
  Matrix g_amp(n, 1);
  for (int i = 0; i < n; ++i) {
    g_amp(i, 0) = uniform();
  }
  Vector x0(static_cast<std::size_t>(n));
  for (double& v : x0) {
    v = uniform();
  }

  std::vector<CoefficientProvider> ns;
  for (int i = 0; i < nu; ++i) {
    ns.push_back(zero_provider(n, n));
  }
  BilinearDynamics dynamics(n, nu, CoefficientProvider::constant(std::move(a)),
                            CoefficientProvider::constant(std::move(b)),
                            std::move(ns),
                            CoefficientProvider::sinusoid(std::move(g_amp), 2.0),
                            std::move(x0));
  QuadraticCost cost(CoefficientProvider::constant(std::move(q)),
                     CoefficientProvider::constant(Matrix::identity(nu)),
                     std::move(h));
  return BilinearProblem(std::move(dynamics), std::move(cost),
                         AdmissibleSet::unconstrained(nu),
                         TimeGrid(0.0, 2.0, grid_steps));
}

std::optional<BilinearProblem> build_builtin(std::string_view name,
                                             std::optional<int> grid_steps) {
  if (name == "savs") {
    return build_savs_problem(grid_steps.value_or(kSavsDefaultSteps));
  }
  if (name == "scalar") {
    return build_scalar_analytic(grid_steps.value_or(kScalarDefaultSteps));
  }
  if (name == "lqr-oracle") {
    return build_linear_oracle(grid_steps.value_or(kLinearOracleDefaultSteps));
  }
  return std::nullopt;
}

ValueCoefficients riccati_oracle(const BilinearProblem& problem) {
  const BilinearDynamics& dyn = problem.dynamics;
  const int n = dyn.n;

  for (const auto& ni : dyn.Ns) {
    if (!ni.is_constant() || norm_inf(ni.amplitude()) != 0.0) {
      throw UnsupportedProblem("riccati_oracle: requires N_i identically zero");
    }
  }
  if (problem.set.kind() != AdmissibleSet::Kind::kUnconstrained) {
    throw UnsupportedProblem("riccati_oracle: requires an unconstrained set");
  }
  {
    const int samples = problem.cost.R.is_constant() ? 1 : problem.grid.nodes();
    for (int j = 0; j < samples; ++j) {
      const Vector eig = sym_eigenvalues(problem.cost.R(problem.grid.node(j)));
      const double scale = std::max(std::abs(eig.front()), std::abs(eig.back()));
      if (!(eig.front() > 1e-10 * scale)) {
        throw UnsupportedProblem("riccati_oracle: requires positive definite R");
      }
    }
  }

  const TimeGrid& grid = problem.grid;
  const std::size_t nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);

  ValueCoefficients vc;
  vc.P.assign(static_cast<std::size_t>(grid.nodes()), Matrix(n, n));
  vc.p.assign(static_cast<std::size_t>(grid.nodes()),
              Vector(static_cast<std::size_t>(n), 0.0));
  vc.P[static_cast<std::size_t>(grid.steps())] = problem.cost.H;

  auto unpack = [n, nn](const Vector& y, Matrix& p_mat, Vector& p_vec) {
    for (std::size_t z = 0; z < nn; ++z) {
      p_mat.data()[z] = y[z];
    }
    for (int i = 0; i < n; ++i) {
      p_vec[static_cast<std::size_t>(i)] = y[nn + static_cast<std::size_t>(i)];
    }
  };

  auto rhs = [&](double t, const Vector& y) {
    Matrix p_mat(n, n);
    Vector p_vec(static_cast<std::size_t>(n));
    unpack(y, p_mat, p_vec);

    const Matrix a = dyn.A(t);
    const Matrix b = dyn.B(t);
    const Matrix r = problem.cost.R(t);
    const Matrix q = problem.cost.Q(t);
    const Matrix g = dyn.g(t);

    const Matrix s = matmul(b, solve_linear(r, transpose(b)));  // B R^{-1} B^T
    const Matrix pa = matmul(p_mat, a);
    const Matrix psp = matmul(p_mat, matmul(s, p_mat));
    Matrix pdot(n, n);
    for (int c = 0; c < n; ++c) {
      for (int rI = 0; rI < n; ++rI) {
        pdot(rI, c) = -pa(rI, c) - pa(c, rI) + psp(rI, c) - q(rI, c);
      }
    }

    // Closed-loop drift: (A - S P)^T p
    const Matrix acl = a - matmul(s, p_mat);
    Vector pdot_vec = matvec_transposed(acl, p_vec);
    Vector gv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      gv[static_cast<std::size_t>(i)] = g(i, 0);
    }
    const Vector pg = matvec(p_mat, gv);
    Vector dy(nn + static_cast<std::size_t>(n));
    for (std::size_t z = 0; z < nn; ++z) {
      dy[z] = pdot.data()[z];
    }
    for (int i = 0; i < n; ++i) {
      dy[nn + static_cast<std::size_t>(i)] =
          -pdot_vec[static_cast<std::size_t>(i)] - pg[static_cast<std::size_t>(i)];
    }
    return dy;
  };

  Vector y(nn + static_cast<std::size_t>(n), 0.0);
  for (std::size_t z = 0; z < nn; ++z) {
    y[z] = problem.cost.H.data()[z];
  }
  for (int j = grid.steps() - 1; j >= 0; --j) {
    y = rk4_step(rhs, grid.node(j + 1), y, -grid.h());
    Matrix& pj = vc.P[static_cast<std::size_t>(j)];
    for (std::size_t z = 0; z < nn; ++z) {
      pj.data()[z] = y[z];
    }
    symmetrize(pj);
    for (std::size_t z = 0; z < nn; ++z) {
      y[z] = pj.data()[z];
    }
    for (int i = 0; i < n; ++i) {
      vc.p[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
          y[nn + static_cast<std::size_t>(i)];
    }
  }
  return vc;
}

}  // namespace cbqr::bench
