#pragma once

#include <memory>
#include <vector>

#include "cbqr/linalg.hpp"

namespace cbqr {

/// Uniform discretization of [t0, tf] into `steps` intervals.
class TimeGrid {
 public:
  TimeGrid(double t0, double tf, int steps);

  double t0() const noexcept { return t0_; }
  double tf() const noexcept { return tf_; }
  int steps() const noexcept { return steps_; }
  int nodes() const noexcept { return steps_ + 1; }
  double h() const noexcept { return h_; }
  double node(int j) const noexcept { return t0_ + j * h_; }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.t0_ == b.t0_ && a.tf_ == b.tf_ && a.steps_ == b.steps_;
  }

 private:
  double t0_;
  double tf_;
  int steps_;
  double h_;
};

/// Time-indexed samples of a fixed-dimension vector quantity on a TimeGrid.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(int dim, int nodes);

  int dim() const noexcept { return dim_; }
  int nodes() const noexcept { return static_cast<int>(samples_.size()); }

  Vector& at(int j) { return samples_[static_cast<std::size_t>(j)]; }
  const Vector& at(int j) const { return samples_[static_cast<std::size_t>(j)]; }

  bool finite() const;

 private:
  int dim_ = 0;
  std::vector<Vector> samples_;
};

/// Time-varying matrix (or vector, as an n x 1 matrix) coefficient:
/// a constant, a sinusoid amplitude * sin(omega*t + phase), or a sum of
/// providers. Deterministic and exactly evaluable at any t.
class CoefficientProvider {
 public:
  enum class Kind { kConstant, kSinusoid, kSum };

  static CoefficientProvider constant(Matrix value);
  static CoefficientProvider sinusoid(Matrix amplitude, double omega, double phase = 0.0);
  static CoefficientProvider sum(std::vector<CoefficientProvider> terms);

  Kind kind() const noexcept { return kind_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool is_constant() const noexcept { return kind_ == Kind::kConstant; }

  void eval_into(double t, Matrix& out) const;
  Matrix operator()(double t) const;

  // Introspection (serialization, equality).
  const Matrix& amplitude() const { return value_; }  // constant value or sinusoid amplitude
  double omega() const noexcept { return omega_; }
  double phase() const noexcept { return phase_; }
  const std::vector<CoefficientProvider>& terms() const { return terms_; }

  friend bool operator==(const CoefficientProvider& a, const CoefficientProvider& b);

 private:
  CoefficientProvider() = default;

  Kind kind_ = Kind::kConstant;
  int rows_ = 0;
  int cols_ = 0;
  Matrix value_;
  double omega_ = 0.0;
  double phase_ = 0.0;
  std::vector<CoefficientProvider> terms_;
};

/// x' = A(t) x + B(t) u + (sum_i u_i N_i(t)) x + g(t), from x(0) = x0.
struct BilinearDynamics {
  BilinearDynamics(int n, int nu, CoefficientProvider a, CoefficientProvider b,
                   std::vector<CoefficientProvider> ns, CoefficientProvider g,
                   Vector x0);

  int n;
  int nu;
  CoefficientProvider A;
  CoefficientProvider B;
  std::vector<CoefficientProvider> Ns;
  CoefficientProvider g;
  Vector x0;
};

/// Quadratic running and terminal weights. H is checked (symmetry, PSD) on
/// construction; Q(t) and R(t) are providers and get checked against a grid
/// by validate_cost / the BilinearProblem constructor.
struct QuadraticCost {
  QuadraticCost(CoefficientProvider q, CoefficientProvider r, Matrix h);

  CoefficientProvider Q;
  CoefficientProvider R;
  Matrix H;
};

/// Symmetry and PSD checks for a weight sample. Throws DimensionError with
/// the offending description. PSD floor: min eig >= -1e-10 * |W|_inf.
void check_weight(const Matrix& w, const char* name);

/// Checks Q(t), R(t) at the grid nodes (constant providers are checked once).
void validate_cost(const QuadraticCost& cost, const TimeGrid& grid);

/// State-independent admissible control set.
class AdmissibleSet {
 public:
  enum class Kind { kUnconstrained, kFiniteSet, kBox };

  static AdmissibleSet unconstrained(int dim);
  static AdmissibleSet finite_set(std::vector<Vector> points);
  static AdmissibleSet box(Vector lo, Vector hi);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }

  const std::vector<Vector>& points() const { return points_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }

  /// Exact membership for finite sets, componentwise bounds for boxes.
  bool contains(const Vector& v) const;

  friend bool operator==(const AdmissibleSet& a, const AdmissibleSet& b);

 private:
  AdmissibleSet() = default;

  Kind kind_ = Kind::kUnconstrained;
  int dim_ = 0;
  std::vector<Vector> points_;
  Vector lo_;
  Vector hi_;
};

/// A full problem instance. Construction validates all cross-dimensions and
/// samples the cost weights over the grid.
struct BilinearProblem {
  BilinearProblem(BilinearDynamics dynamics, QuadraticCost cost,
                  AdmissibleSet set, TimeGrid grid);

  BilinearDynamics dynamics;
  QuadraticCost cost;
  AdmissibleSet set;
  TimeGrid grid;

  int n() const noexcept { return dynamics.n; }
  int nu() const noexcept { return dynamics.nu; }
};

/// An admissible state/control trajectory pair with its cost.
struct Process {
  Process(Trajectory x, Trajectory u, double cost, const AdmissibleSet& set);

  Trajectory x;
  Trajectory u;
  double cost;
};

// ---- elementary bilinear-algebra evaluations --------------------------------

/// sum_i u_i N_i(t)
Matrix brace_uN(const Vector& u, const BilinearDynamics& dynamics, double t);
void brace_uN_into(const Vector& u, const BilinearDynamics& dynamics, double t,
                   Matrix& out, Matrix& scratch);

/// n x nu matrix whose column i is N_i(t) xi.
Matrix control_matrix(const Vector& xi, const BilinearDynamics& dynamics, double t);

/// A(t) xi + B(t) nu + brace_uN(nu) xi + g(t)
Vector dynamics_rhs(double t, const Vector& xi, const Vector& nu,
                    const BilinearDynamics& dynamics);

/// q(t, xi) = xi^T P xi / 2 + p^T xi
double eval_q(const Matrix& p_mat, const Vector& p_vec, const Vector& xi);

}  // namespace cbqr
