#include "cbqr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cbqr/errors.hpp"
#include "cbqr/kernels.hpp"

namespace cbqr {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
  if (rows < 0 || cols < 0) {
    throw DimensionError("Matrix: negative dimensions");
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) {
    m(i, i) = d[static_cast<std::size_t>(i)];
  }
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) {
      throw DimensionError("Matrix::from_rows: ragged rows");
    }
    int j = 0;
    for (double v : row) {
      m(i, j++) = v;
    }
    ++i;
  }
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

// ---- dispatched products -------------------------------------------------

void matvec_into(const Matrix& a, const double* x, double* y) {
  kernels::active().matvec(static_cast<std::size_t>(a.rows()),
                           static_cast<std::size_t>(a.cols()), a.data(), x, y);
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (static_cast<int>(x.size()) != a.cols()) {
    throw DimensionError("matvec: size mismatch");
  }
  Vector y(static_cast<std::size_t>(a.rows()));
  matvec_into(a, x.data(), y.data());
  return y;
}

void matvec_transposed_into(const Matrix& a, const double* x, double* y) {
  kernels::active().matvec_t(static_cast<std::size_t>(a.rows()),
                             static_cast<std::size_t>(a.cols()), a.data(), x, y);
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
  if (static_cast<int>(x.size()) != a.rows()) {
    throw DimensionError("matvec_transposed: size mismatch");
  }
  Vector y(static_cast<std::size_t>(a.cols()));
  matvec_transposed_into(a, x.data(), y.data());
  return y;
}

void matmul_into(const Matrix& a, const Matrix& b, Matrix& c) {
  kernels::active().matmul(static_cast<std::size_t>(a.rows()),
                           static_cast<std::size_t>(a.cols()),
                           static_cast<std::size_t>(b.cols()), a.data(),
                           b.data(), c.data());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions differ");
  }
  Matrix c(a.rows(), b.cols());
  matmul_into(a, b, c);
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }
Vector operator*(const Matrix& a, const Vector& x) { return matvec(a, x); }

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.data()[i] *= s;
  }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("Matrix +: shape mismatch");
  }
  Matrix r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.data()[i] += b.data()[i];
  }
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionError("Matrix -: shape mismatch");
  }
  Matrix r = a;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r.data()[i] -= b.data()[i];
  }
  return r;
}

// ---- elementwise / reductions ---------------------------------------------

double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("dot: size mismatch");
  }
  // Kept scalar in all lanes: vectorizing a single reduction would change
  // the accumulation order.
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
  double m = 0.0;
  for (double v : x) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double norm_inf(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.data()[i]));
  }
  return m;
}

bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.data()[i])) {
      return false;
    }
  }
  return true;
}

double quad_form(const Matrix& p, const Vector& x) {
  return dot(x, matvec(p, x));
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

void symmetrize(Matrix& a) {
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
}

double asymmetry(const Matrix& a) {
  double m = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      m = std::max(m, std::abs(a(i, j) - a(j, i)));
    }
  }
  return m;
}

// ---- small dense solvers ----------------------------------------------------

Vector sym_eigenvalues(Matrix a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("sym_eigenvalues: matrix not square");
  }
  const int n = a.rows();
  // Cyclic Jacobi. Plenty for the small symmetric matrices handled here.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        off += a(i, j) * a(i, j);
      }
    }
    if (off <= 1e-30 * std::max(1.0, norm_inf(a) * norm_inf(a))) {
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    eig[static_cast<std::size_t>(i)] = a(i, i);
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

Matrix solve_linear(Matrix a, Matrix b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw DimensionError("solve_linear: shape mismatch");
  }
  const int n = a.rows();
  const int nrhs = b.cols();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i) {
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) {
        piv = i;
      }
    }
    if (a(piv, col) == 0.0) {
      throw DimensionError("solve_linear: singular matrix");
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(piv, j));
      }
      for (int j = 0; j < nrhs; ++j) {
        std::swap(b(col, j), b(piv, j));
      }
    }
    const double inv = 1.0 / a(col, col);
    for (int i = col + 1; i < n; ++i) {
      const double f = a(i, col) * inv;
      if (f == 0.0) {
        continue;
      }
      for (int j = col; j < n; ++j) {
        a(i, j) -= f * a(col, j);
      }
      for (int j = 0; j < nrhs; ++j) {
        b(i, j) -= f * b(col, j);
      }
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const double inv = 1.0 / a(col, col);
    for (int j = 0; j < nrhs; ++j) {
      double acc = b(col, j);
      for (int k = col + 1; k < n; ++k) {
        acc -= a(col, k) * b(k, j);
      }
      b(col, j) = acc * inv;
    }
  }
  return b;
}

Vector solve_linear(Matrix a, Vector b) {
  Matrix rhs(static_cast<int>(b.size()), 1);
  for (std::size_t i = 0; i < b.size(); ++i) {
    rhs(static_cast<int>(i), 0) = b[i];
  }
  const Matrix x = solve_linear(std::move(a), std::move(rhs));
  Vector out(static_cast<std::size_t>(x.rows()));
  for (int i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = x(i, 0);
  }
  return out;
}

}  // namespace cbqr
