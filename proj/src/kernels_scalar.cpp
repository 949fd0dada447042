#include "cbqr/kernels.hpp"

// Scalar reference lane. The SIMD lanes replicate these loops exactly,
// element for element, so keep the evaluation order here authoritative:
// per output element every reduction runs low-index to high-index.

namespace cbqr::kernels {
namespace {

void axpy_scalar(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = y[i] + alpha * x[i];
  }
}

void add_scaled_scalar(std::size_t n, const double* y, double alpha,
                       const double* x, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + alpha * x[i];
  }
}

void rk4_combine_scalar(std::size_t n, const double* y, double h6,
                        const double* k1, const double* k2, const double* k3,
                        const double* k4, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double t1 = k1[i] + 2.0 * k2[i];
    const double t2 = 2.0 * k3[i] + k4[i];
    out[i] = y[i] + h6 * (t1 + t2);
  }
}

void matvec_scalar(std::size_t rows, std::size_t cols, const double* a,
                   const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = 0.0;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    const double* col = a + j * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      y[i] = y[i] + col[i] * xj;
    }
  }
}

void matvec_t_scalar(std::size_t rows, std::size_t cols, const double* a,
                     const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = a + j * rows;
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      acc = acc + col[i] * x[i];
    }
    y[j] = acc;
  }
}

void matmul_scalar(std::size_t m, std::size_t k, std::size_t n,
                   const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m * n; ++i) {
    c[i] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double* ccol = c + j * m;
    for (std::size_t l = 0; l < k; ++l) {
      const double blj = b[l + j * k];
      const double* acol = a + l * m;
      for (std::size_t i = 0; i < m; ++i) {
        ccol[i] = ccol[i] + acol[i] * blj;
      }
    }
  }
}

}  // namespace

const Ops scalar_ops = {
    "scalar",        axpy_scalar,     add_scaled_scalar,
    rk4_combine_scalar, matvec_scalar, matvec_t_scalar,
    matmul_scalar,
};

}  // namespace cbqr::kernels
