#include "cbqr/model.hpp"

#include <cmath>
#include <string>

#include "cbqr/errors.hpp"
#include "cbqr/kernels.hpp"

namespace cbqr {

TimeGrid::TimeGrid(double t0, double tf, int steps)
    : t0_(t0), tf_(tf), steps_(steps), h_((tf - t0) / steps) {
  if (!(tf > t0)) {
    throw DimensionError("TimeGrid: tf must exceed t0");
  }
  if (steps < 1) {
    throw DimensionError("TimeGrid: steps must be >= 1");
  }
}

Trajectory::Trajectory(int dim, int nodes) : dim_(dim) {
  if (dim < 1 || nodes < 1) {
    throw DimensionError("Trajectory: dim and node count must be positive");
  }
  samples_.assign(static_cast<std::size_t>(nodes), Vector(static_cast<std::size_t>(dim), 0.0));
}

bool Trajectory::finite() const {
  for (const Vector& s : samples_) {
    if (!all_finite(s)) {
      return false;
    }
  }
  return true;
}

// ---- CoefficientProvider ----------------------------------------------------

CoefficientProvider CoefficientProvider::constant(Matrix value) {
  if (!all_finite(value)) {
    throw DimensionError("CoefficientProvider: constant value not finite");
  }
  CoefficientProvider p;
  p.kind_ = Kind::kConstant;
  p.rows_ = value.rows();
  p.cols_ = value.cols();
  p.value_ = std::move(value);
  return p;
}

CoefficientProvider CoefficientProvider::sinusoid(Matrix amplitude, double omega,
                                                  double phase) {
  if (!all_finite(amplitude) || !std::isfinite(omega) || !std::isfinite(phase)) {
    throw DimensionError("CoefficientProvider: sinusoid parameters not finite");
  }
  CoefficientProvider p;
  p.kind_ = Kind::kSinusoid;
  p.rows_ = amplitude.rows();
  p.cols_ = amplitude.cols();
  p.value_ = std::move(amplitude);
  p.omega_ = omega;
  p.phase_ = phase;
  return p;
}

CoefficientProvider CoefficientProvider::sum(std::vector<CoefficientProvider> terms) {
  if (terms.empty()) {
    throw DimensionError("CoefficientProvider: sum of zero terms");
  }
  CoefficientProvider p;
  p.kind_ = Kind::kSum;
  p.rows_ = terms.front().rows();
  p.cols_ = terms.front().cols();
  for (const auto& t : terms) {
    if (t.rows() != p.rows_ || t.cols() != p.cols_) {
      throw DimensionError("CoefficientProvider: sum terms have mixed shapes");
    }
  }
  p.terms_ = std::move(terms);
  return p;
}

void CoefficientProvider::eval_into(double t, Matrix& out) const {
  switch (kind_) {
    case Kind::kConstant:
      out = value_;
      return;
    case Kind::kSinusoid: {
      const double s = std::sin(omega_ * t + phase_);
      out = value_;
      for (std::size_t i = 0; i < out.size(); ++i) {
        out.data()[i] *= s;
      }
      return;
    }
    case Kind::kSum: {
      terms_.front().eval_into(t, out);
      Matrix scratch;
      for (std::size_t k = 1; k < terms_.size(); ++k) {
        terms_[k].eval_into(t, scratch);
        for (std::size_t i = 0; i < out.size(); ++i) {
          out.data()[i] += scratch.data()[i];
        }
      }
      return;
    }
  }
}

Matrix CoefficientProvider::operator()(double t) const {
  Matrix out;
  eval_into(t, out);
  return out;
}

bool operator==(const CoefficientProvider& a, const CoefficientProvider& b) {
  if (a.kind_ != b.kind_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    return false;
  }
  switch (a.kind_) {
    case CoefficientProvider::Kind::kConstant:
      return a.value_ == b.value_;
    case CoefficientProvider::Kind::kSinusoid:
      return a.value_ == b.value_ && a.omega_ == b.omega_ && a.phase_ == b.phase_;
    case CoefficientProvider::Kind::kSum:
      return a.terms_ == b.terms_;
  }
  return false;
}

// ---- dynamics ----------------------------------------------------------------

BilinearDynamics::BilinearDynamics(int n_in, int nu_in, CoefficientProvider a,
                                   CoefficientProvider b,
                                   std::vector<CoefficientProvider> ns,
                                   CoefficientProvider g_in, Vector x0_in)
    : n(n_in), nu(nu_in), A(std::move(a)), B(std::move(b)), Ns(std::move(ns)),
      g(std::move(g_in)), x0(std::move(x0_in)) {
  if (n < 1 || nu < 1) {
    throw DimensionError("BilinearDynamics: n and nu must be positive");
  }
  if (A.rows() != n || A.cols() != n) {
    throw DimensionError("BilinearDynamics: A must be n x n");
  }
  if (B.rows() != n || B.cols() != nu) {
    throw DimensionError("BilinearDynamics: B must be n x nu");
  }
  if (static_cast<int>(Ns.size()) != nu) {
    throw DimensionError("BilinearDynamics: need one N_i per control channel");
  }
  for (const auto& N : Ns) {
    if (N.rows() != n || N.cols() != n) {
      throw DimensionError("BilinearDynamics: every N_i must be n x n");
    }
  }
  if (g.rows() != n || g.cols() != 1) {
    throw DimensionError("BilinearDynamics: g must be an n-vector");
  }
  if (static_cast<int>(x0.size()) != n || !all_finite(x0)) {
    throw DimensionError("BilinearDynamics: x0 must be a finite n-vector");
  }
}

// ---- cost ----------------------------------------------------------------------

void check_weight(const Matrix& w, const char* name) {
  if (w.rows() != w.cols()) {
    throw DimensionError(std::string(name) + ": weight not square");
  }
  const double scale = norm_inf(w);
  if (asymmetry(w) > 1e-12 * std::max(1.0, scale)) {
    throw DimensionError(std::string(name) + ": weight not symmetric");
  }
  const Vector eig = sym_eigenvalues(w);
  if (!eig.empty() && eig.front() < -1e-10 * std::max(1.0, scale)) {
    throw DimensionError(std::string(name) + ": weight not positive semidefinite");
  }
}

QuadraticCost::QuadraticCost(CoefficientProvider q, CoefficientProvider r, Matrix h)
    : Q(std::move(q)), R(std::move(r)), H(std::move(h)) {
  if (Q.rows() != Q.cols()) {
    throw DimensionError("QuadraticCost: Q must be square");
  }
  if (R.rows() != R.cols()) {
    throw DimensionError("QuadraticCost: R must be square");
  }
  if (H.rows() != Q.rows() || H.cols() != Q.cols()) {
    throw DimensionError("QuadraticCost: H must match Q's shape");
  }
  check_weight(H, "H");
}

void validate_cost(const QuadraticCost& cost, const TimeGrid& grid) {
  const int q_samples = cost.Q.is_constant() ? 1 : grid.nodes();
  const int r_samples = cost.R.is_constant() ? 1 : grid.nodes();
  Matrix w;
  for (int j = 0; j < q_samples; ++j) {
    cost.Q.eval_into(grid.node(j), w);
    check_weight(w, "Q");
  }
  for (int j = 0; j < r_samples; ++j) {
    cost.R.eval_into(grid.node(j), w);
    check_weight(w, "R");
  }
}

// ---- admissible set --------------------------------------------------------------

AdmissibleSet AdmissibleSet::unconstrained(int dim) {
  if (dim < 1) {
    throw DimensionError("AdmissibleSet: dim must be positive");
  }
  AdmissibleSet s;
  s.kind_ = Kind::kUnconstrained;
  s.dim_ = dim;
  return s;
}

AdmissibleSet AdmissibleSet::finite_set(std::vector<Vector> points) {
  if (points.empty()) {
    throw DimensionError("AdmissibleSet: finite set needs at least one point");
  }
  AdmissibleSet s;
  s.kind_ = Kind::kFiniteSet;
  s.dim_ = static_cast<int>(points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != s.dim_ || !all_finite(points[i])) {
      throw DimensionError("AdmissibleSet: finite-set points must be finite, equal-length");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (points[k] == points[i]) {
        throw DimensionError("AdmissibleSet: finite-set points must be distinct");
      }
    }
  }
  s.points_ = std::move(points);
  return s;
}

AdmissibleSet AdmissibleSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw DimensionError("AdmissibleSet: box bounds must be nonempty, equal-length");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) {
      throw DimensionError("AdmissibleSet: box needs lo <= hi componentwise");
    }
  }
  AdmissibleSet s;
  s.kind_ = Kind::kBox;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

bool AdmissibleSet::contains(const Vector& v) const {
  if (static_cast<int>(v.size()) != dim_) {
    return false;
  }
  switch (kind_) {
    case Kind::kUnconstrained:
      return all_finite(v);
    case Kind::kFiniteSet:
      for (const Vector& p : points_) {
        if (p == v) {
          return true;
        }
      }
      return false;
    case Kind::kBox:
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(lo_[i] <= v[i] && v[i] <= hi_[i])) {
          return false;
        }
      }
      return true;
  }
  return false;
}

bool operator==(const AdmissibleSet& a, const AdmissibleSet& b) {
  if (a.kind_ != b.kind_ || a.dim_ != b.dim_) {
    return false;
  }
  switch (a.kind_) {
    case AdmissibleSet::Kind::kUnconstrained:
      return true;
    case AdmissibleSet::Kind::kFiniteSet:
      return a.points_ == b.points_;
    case AdmissibleSet::Kind::kBox:
      return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }
  return false;
}

// ---- problem / process --------------------------------------------------------------

BilinearProblem::BilinearProblem(BilinearDynamics dynamics_in, QuadraticCost cost_in,
                                 AdmissibleSet set_in, TimeGrid grid_in)
    : dynamics(std::move(dynamics_in)), cost(std::move(cost_in)),
      set(std::move(set_in)), grid(grid_in) {
  if (cost.Q.rows() != dynamics.n) {
    throw DimensionError("BilinearProblem: Q dimension does not match state");
  }
  if (cost.R.rows() != dynamics.nu) {
    throw DimensionError("BilinearProblem: R dimension does not match control");
  }
  if (set.dim() != dynamics.nu) {
    throw DimensionError("BilinearProblem: admissible set dimension does not match control");
  }
  validate_cost(cost, grid);
}

Process::Process(Trajectory x_in, Trajectory u_in, double cost_in,
                 const AdmissibleSet& set)
    : x(std::move(x_in)), u(std::move(u_in)), cost(cost_in) {
  if (!std::isfinite(cost)) {
    throw DimensionError("Process: cost not finite");
  }
  if (x.nodes() != u.nodes()) {
    throw DimensionError("Process: x and u node counts differ");
  }
  if (!x.finite()) {
    throw DimensionError("Process: state trajectory not finite");
  }
  for (int j = 0; j < u.nodes(); ++j) {
    if (!set.contains(u.at(j))) {
      throw DimensionError("Process: control sample outside admissible set");
    }
  }
}

// ---- elementary evaluations ------------------------------------------------------------

void brace_uN_into(const Vector& u, const BilinearDynamics& dynamics, double t,
                   Matrix& out, Matrix& scratch) {
  if (static_cast<int>(u.size()) != dynamics.nu) {
    throw DimensionError("brace_uN: control dimension mismatch");
  }
  if (out.rows() != dynamics.n || out.cols() != dynamics.n) {
    out = Matrix(dynamics.n, dynamics.n);
  }
  for (std::size_t z = 0; z < out.size(); ++z) {
    out.data()[z] = 0.0;
  }
  for (int i = 0; i < dynamics.nu; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    if (ui == 0.0) {
      continue;
    }
    dynamics.Ns[static_cast<std::size_t>(i)].eval_into(t, scratch);
    kernels::active().axpy(out.size(), ui, scratch.data(), out.data());
  }
}

Matrix brace_uN(const Vector& u, const BilinearDynamics& dynamics, double t) {
  Matrix out;
  Matrix scratch;
  brace_uN_into(u, dynamics, t, out, scratch);
  return out;
}

Matrix control_matrix(const Vector& xi, const BilinearDynamics& dynamics, double t) {
  if (static_cast<int>(xi.size()) != dynamics.n) {
    throw DimensionError("control_matrix: state dimension mismatch");
  }
  Matrix m(dynamics.n, dynamics.nu);
  Matrix ni;
  for (int i = 0; i < dynamics.nu; ++i) {
    dynamics.Ns[static_cast<std::size_t>(i)].eval_into(t, ni);
    matvec_into(ni, xi.data(), m.data() + static_cast<std::size_t>(i) * dynamics.n);
  }
  return m;
}

Vector dynamics_rhs(double t, const Vector& xi, const Vector& nu,
                    const BilinearDynamics& dynamics) {
  if (!all_finite(xi) || !all_finite(nu)) {
    throw DimensionError("dynamics_rhs: non-finite input");
  }
  if (static_cast<int>(xi.size()) != dynamics.n ||
      static_cast<int>(nu.size()) != dynamics.nu) {
    throw DimensionError("dynamics_rhs: dimension mismatch");
  }
  Matrix a = dynamics.A(t);
  Matrix scratch;
  Matrix un;
  brace_uN_into(nu, dynamics, t, un, scratch);
  // (A + {uN}) xi
  for (std::size_t z = 0; z < a.size(); ++z) {
    a.data()[z] += un.data()[z];
  }
  Vector out = matvec(a, xi);
  const Matrix b = dynamics.B(t);
  const Vector bu = matvec(b, nu);
  const Matrix gm = dynamics.g(t);
  for (int i = 0; i < dynamics.n; ++i) {
    out[static_cast<std::size_t>(i)] += bu[static_cast<std::size_t>(i)] + gm(i, 0);
  }
  return out;
}

double eval_q(const Matrix& p_mat, const Vector& p_vec, const Vector& xi) {
  if (p_mat.rows() != p_mat.cols() ||
      p_mat.rows() != static_cast<int>(xi.size()) || p_vec.size() != xi.size()) {
    throw DimensionError("eval_q: dimension mismatch");
  }
  return 0.5 * quad_form(p_mat, xi) + dot(p_vec, xi);
}

}  // namespace cbqr
