#include "doctest.h"

#include <cmath>

#include "cbqr/bench.hpp"
#include "cbqr/errors.hpp"
#include "cbqr/model.hpp"
#include "test_support.hpp"

using namespace cbqr;
using cbqr::testing::Rng;

namespace {

BilinearDynamics make_dynamics(int n, int nu, Matrix a, Matrix b,
                               std::vector<Matrix> ns, Vector g_amp, Vector x0) {
  std::vector<CoefficientProvider> providers;
  for (auto& m : ns) {
    providers.push_back(CoefficientProvider::constant(std::move(m)));
  }
  Matrix g(n, 1);
  for (int i = 0; i < n; ++i) {
    g(i, 0) = g_amp[static_cast<std::size_t>(i)];
  }
  return BilinearDynamics(n, nu, CoefficientProvider::constant(std::move(a)),
                          CoefficientProvider::constant(std::move(b)),
                          std::move(providers), CoefficientProvider::constant(std::move(g)),
                          std::move(x0));
}

}  // namespace

TEST_SUITE_BEGIN("model");

TEST_CASE("time grid nodes and validation") {
  const TimeGrid grid(0.0, 1.0, 4);
  CHECK(grid.h() == 0.25);
  CHECK(grid.node(0) == 0.0);
  CHECK(grid.node(4) == 1.0);
  CHECK(grid.nodes() == 5);
  CHECK_THROWS_AS(TimeGrid(1.0, 1.0, 4), DimensionError);
  CHECK_THROWS_AS(TimeGrid(0.0, 1.0, 0), DimensionError);
}

TEST_CASE("coefficient providers evaluate and validate") {
  const auto c = CoefficientProvider::constant(Matrix::from_rows({{1.0, 2.0}}));
  CHECK(c(123.0)(0, 1) == 2.0);

  Matrix amp(2, 1);
  amp(0, 0) = 3.0;
  amp(1, 0) = -1.0;
  const auto s = CoefficientProvider::sinusoid(amp, 2.0, 0.5);
  const double expected = 3.0 * std::sin(2.0 * 0.75 + 0.5);
  CHECK(s(0.75)(0, 0) == doctest::Approx(expected).epsilon(1e-15));

  const auto total = CoefficientProvider::sum({c, c});
  CHECK(total(0.0)(0, 0) == 2.0);

  CHECK_THROWS_AS(CoefficientProvider::sum({}), DimensionError);
  CHECK_THROWS_AS(
      CoefficientProvider::sum({c, CoefficientProvider::constant(Matrix(2, 2))}),
      DimensionError);
}

TEST_CASE("brace_uN spec cases") {
  auto dyn = make_dynamics(2, 2, Matrix(2, 2), Matrix(2, 2),
                           {Matrix::identity(2), Matrix::identity(2)},
                           Vector{0.0, 0.0}, Vector{0.0, 0.0});

  SUBCASE("zero coefficients give the zero matrix") {
    const Matrix m = brace_uN(Vector{0.0, 0.0}, dyn, 0.3);
    CHECK(norm_inf(m) == 0.0);
  }
  SUBCASE("identity case") {
    const Matrix k = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    auto dyn1 = make_dynamics(2, 1, Matrix(2, 2), Matrix(2, 1), {k},
                              Vector{0.0, 0.0}, Vector{0.0, 0.0});
    CHECK(brace_uN(Vector{1.0}, dyn1, 0.0) == k);
  }
  SUBCASE("linearity across channels") {
    const Matrix m = brace_uN(Vector{2.0, 3.0}, dyn, 0.0);
    CHECK(m(0, 0) == 5.0);
    CHECK(m(1, 1) == 5.0);
    CHECK(m(0, 1) == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(brace_uN(Vector{1.0}, dyn, 0.0), DimensionError);
  }
}

TEST_CASE("brace_uN is linear in u") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + rng.index(4);
    const int nu = 1 + rng.index(3);
    std::vector<Matrix> ns;
    for (int i = 0; i < nu; ++i) {
      ns.push_back(rng.matrix(n, n));
    }
    auto dyn = make_dynamics(n, nu, Matrix(n, n), Matrix(n, nu), std::move(ns),
                             Vector(static_cast<std::size_t>(n), 0.0),
                             Vector(static_cast<std::size_t>(n), 0.0));
    const Vector u = rng.vector(static_cast<std::size_t>(nu));
    const Vector v = rng.vector(static_cast<std::size_t>(nu));
    const double alpha = rng.uniform();
    const double beta = rng.uniform();
    Vector combo(static_cast<std::size_t>(nu));
    for (std::size_t i = 0; i < combo.size(); ++i) {
      combo[i] = alpha * u[i] + beta * v[i];
    }
    const Matrix lhs = brace_uN(combo, dyn, 0.0);
    const Matrix rhs = alpha * brace_uN(u, dyn, 0.0) + beta * brace_uN(v, dyn, 0.0);
    const double scale = std::max(1.0, std::max(norm_inf(lhs), norm_inf(rhs)));
    CHECK(norm_inf(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("control_matrix spec cases") {
  SUBCASE("zero state gives zero matrix") {
    auto dyn = make_dynamics(2, 1, Matrix(2, 2), Matrix(2, 1), {Matrix::identity(2)},
                             Vector{0.0, 0.0}, Vector{0.0, 0.0});
    CHECK(norm_inf(control_matrix(Vector{0.0, 0.0}, dyn, 0.0)) == 0.0);
  }
  SUBCASE("identity N maps state to first column") {
    auto dyn = make_dynamics(2, 1, Matrix(2, 2), Matrix(2, 1), {Matrix::identity(2)},
                             Vector{0.0, 0.0}, Vector{0.0, 0.0});
    const Matrix m = control_matrix(Vector{1.0, 2.0}, dyn, 0.0);
    CHECK(m(0, 0) == 1.0);
    CHECK(m(1, 0) == 2.0);
  }
  SUBCASE("savs device columns at the sixth unit vector") {
    const BilinearProblem savs = bench::build_savs_problem(10);
    Vector e6(6, 0.0);
    e6[5] = 1.0;
    const Matrix m = control_matrix(e6, savs.dynamics, 1.234);
    for (int i = 0; i < 6; ++i) {
      CHECK(m(i, 0) == (i == 5 ? -5000.0 : 0.0));
      CHECK(m(i, 1) == (i == 5 ? -5000.0 : 0.0));
    }
  }
}

TEST_CASE("brace and control_matrix agree: {uN} xi == M(xi) u") {
  Rng rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + rng.index(5);
    const int nu = 1 + rng.index(4);
    std::vector<Matrix> ns;
    for (int i = 0; i < nu; ++i) {
      ns.push_back(rng.matrix(n, n));
    }
    auto dyn = make_dynamics(n, nu, Matrix(n, n), Matrix(n, nu), std::move(ns),
                             Vector(static_cast<std::size_t>(n), 0.0),
                             Vector(static_cast<std::size_t>(n), 0.0));
    const Vector xi = rng.vector(static_cast<std::size_t>(n));
    const Vector nu_vec = rng.vector(static_cast<std::size_t>(nu));
    const Vector lhs = brace_uN(nu_vec, dyn, 0.0) * xi;
    const Vector rhs = control_matrix(xi, dyn, 0.0) * nu_vec;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const double scale = std::max({1.0, std::abs(lhs[i]), std::abs(rhs[i])});
      CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("dynamics_rhs spec cases") {
  SUBCASE("homogeneous terms vanish at the origin") {
    auto dyn = make_dynamics(2, 1, Matrix::identity(2), Matrix(2, 1),
                             {Matrix::identity(2)}, Vector{0.5, -2.0}, Vector{0.0, 0.0});
    const Vector f = dynamics_rhs(0.0, Vector{0.0, 0.0}, Vector{0.0}, dyn);
    CHECK(f[0] == 0.5);
    CHECK(f[1] == -2.0);
  }
  SUBCASE("linear case reduces to A xi") {
    const Matrix a = Matrix::from_rows({{0.0, 1.0}, {-2.0, -0.5}});
    auto dyn = make_dynamics(2, 1, a, Matrix(2, 1), {Matrix::identity(2)},
                             Vector{0.0, 0.0}, Vector{0.0, 0.0});
    const Vector xi{1.0, 2.0};
    const Vector f = dynamics_rhs(0.7, xi, Vector{0.0}, dyn);
    const Vector ax = a * xi;
    CHECK(f[0] == ax[0]);
    CHECK(f[1] == ax[1]);
  }
  SUBCASE("hand-evaluated scalar bilinear formula") {
    auto dyn = make_dynamics(1, 1, Matrix(1, 1), Matrix::from_rows({{1.0}}),
                             {Matrix::from_rows({{1.0}})}, Vector{0.0}, Vector{0.0});
    const Vector f = dynamics_rhs(0.0, Vector{2.0}, Vector{3.0}, dyn);
    CHECK(f[0] == 9.0);  // B nu + nu N xi = 3 + 3*2
  }
  SUBCASE("non-finite input is rejected") {
    auto dyn = make_dynamics(1, 1, Matrix(1, 1), Matrix(1, 1),
                             {Matrix(1, 1)}, Vector{0.0}, Vector{0.0});
    CHECK_THROWS_AS(
        dynamics_rhs(0.0, Vector{std::nan("")}, Vector{0.0}, dyn), DimensionError);
  }
}

TEST_CASE("eval_q spec cases") {
  CHECK(eval_q(Matrix::identity(2), Vector{1.0, 1.0}, Vector{0.0, 0.0}) == 0.0);
  CHECK(eval_q(2.0 * Matrix::identity(2), Vector{0.0, 0.0}, Vector{1.0, 1.0}) == 2.0);
  CHECK_THROWS_AS(eval_q(Matrix::identity(3), Vector{0.0, 0.0}, Vector{0.0, 0.0}),
                  DimensionError);
}

TEST_CASE("quadratic cost rejects bad weights") {
  const auto q_ok = CoefficientProvider::constant(Matrix::identity(2));
  const auto r_ok = CoefficientProvider::constant(Matrix::identity(1));

  // Asymmetric H
  CHECK_THROWS_AS(QuadraticCost(q_ok, r_ok, Matrix::from_rows({{1.0, 0.5}, {0.0, 1.0}})),
                  DimensionError);
  // Indefinite H
  CHECK_THROWS_AS(QuadraticCost(q_ok, r_ok, Matrix::from_rows({{1.0, 0.0}, {0.0, -1.0}})),
                  DimensionError);

  // Indefinite Q surfaces at grid validation
  const auto q_bad =
      CoefficientProvider::constant(Matrix::from_rows({{-1.0, 0.0}, {0.0, 1.0}}));
  const QuadraticCost cost(q_bad, r_ok, Matrix(2, 2));
  CHECK_THROWS_AS(validate_cost(cost, TimeGrid(0.0, 1.0, 4)), DimensionError);

  // PSD with a zero eigenvalue is fine
  const QuadraticCost ok(CoefficientProvider::constant(Matrix(2, 2)), r_ok, Matrix(2, 2));
  CHECK_NOTHROW(validate_cost(ok, TimeGrid(0.0, 1.0, 4)));
}

TEST_CASE("admissible sets validate and test membership") {
  CHECK_THROWS_AS(AdmissibleSet::finite_set({}), DimensionError);
  CHECK_THROWS_AS(AdmissibleSet::finite_set({Vector{1.0}, Vector{1.0}}), DimensionError);
  CHECK_THROWS_AS(AdmissibleSet::box(Vector{1.0}, Vector{0.0}), DimensionError);

  const auto fs = AdmissibleSet::finite_set({Vector{0.0, 1.0}, Vector{1.0, 0.0}});
  CHECK(fs.contains(Vector{0.0, 1.0}));
  CHECK_FALSE(fs.contains(Vector{0.0, 0.0}));

  const auto box = AdmissibleSet::box(Vector{-1.0, 0.0}, Vector{1.0, 2.0});
  CHECK(box.contains(Vector{0.0, 2.0}));
  CHECK_FALSE(box.contains(Vector{0.0, 2.5}));
}

TEST_CASE("process construction enforces admissibility") {
  const auto set = AdmissibleSet::finite_set({Vector{0.0}, Vector{1.0}});
  Trajectory x(1, 3);
  Trajectory u(1, 3);
  CHECK_NOTHROW(Process(x, u, 0.0, set));
  u.at(1) = Vector{0.5};
  CHECK_THROWS_AS(Process(x, u, 0.0, set), DimensionError);
}

TEST_SUITE_END();
