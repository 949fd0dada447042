#pragma once

#include <initializer_list>
#include <vector>

namespace cbqr {

using Vector = std::vector<double>;

/// Dense column-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);

  static Matrix identity(int n);
  static Matrix diagonal(const Vector& d);
  /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * rows_]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * rows_]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix& a, const Matrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// ---- dispatched products -------------------------------------------------

Vector matvec(const Matrix& a, const Vector& x);
void matvec_into(const Matrix& a, const double* x, double* y);
Vector matvec_transposed(const Matrix& a, const Vector& x);
void matvec_transposed_into(const Matrix& a, const double* x, double* y);
Matrix matmul(const Matrix& a, const Matrix& b);
void matmul_into(const Matrix& a, const Matrix& b, Matrix& c);

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator*(double s, const Matrix& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

// ---- elementwise / reductions ---------------------------------------------

double dot(const Vector& x, const Vector& y);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
double norm_inf(const Matrix& a);
bool all_finite(const Vector& x);
bool all_finite(const Matrix& a);

/// x^T P x
double quad_form(const Matrix& p, const Vector& x);

Matrix transpose(const Matrix& a);
/// A <- (A + A^T) / 2
void symmetrize(Matrix& a);
/// max |A(i,j) - A(j,i)| over all pairs
double asymmetry(const Matrix& a);

// ---- small dense solvers ----------------------------------------------------

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector sym_eigenvalues(Matrix a);

/// Solve A x = b with Gaussian elimination, partial pivoting.
/// Throws DimensionError on shape mismatch or a (numerically) singular A.
Vector solve_linear(Matrix a, Vector b);
Matrix solve_linear(Matrix a, Matrix b);

}  // namespace cbqr
