#include "cbqr/kernels.hpp"

#include <arm_neon.h>

// NEON lane, 2 doubles per vector. Same contract as the AVX2 lane:
// vectorize across output elements, scalar reduction order per output,
// no fused multiply-add, scalar tails.

namespace cbqr::kernels {
namespace {

void axpy_neon(std::size_t n, double alpha, const double* x, double* y) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    vst1q_f64(y + i, vaddq_f64(vy, vmulq_f64(va, vx)));
  }
  for (; i < n; ++i) {
    y[i] = y[i] + alpha * x[i];
  }
}

void add_scaled_neon(std::size_t n, const double* y, double alpha,
                     const double* x, double* out) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    vst1q_f64(out + i, vaddq_f64(vy, vmulq_f64(va, vx)));
  }
  for (; i < n; ++i) {
    out[i] = y[i] + alpha * x[i];
  }
}

void rk4_combine_neon(std::size_t n, const double* y, double h6,
                      const double* k1, const double* k2, const double* k3,
                      const double* k4, double* out) {
  const float64x2_t vh6 = vdupq_n_f64(h6);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v1 = vld1q_f64(k1 + i);
    const float64x2_t v2 = vld1q_f64(k2 + i);
    const float64x2_t v3 = vld1q_f64(k3 + i);
    const float64x2_t v4 = vld1q_f64(k4 + i);
    const float64x2_t t1 = vaddq_f64(v1, vmulq_f64(two, v2));
    const float64x2_t t2 = vaddq_f64(vmulq_f64(two, v3), v4);
    const float64x2_t vy = vld1q_f64(y + i);
    vst1q_f64(out + i, vaddq_f64(vy, vmulq_f64(vh6, vaddq_f64(t1, t2))));
  }
  for (; i < n; ++i) {
    const double t1 = k1[i] + 2.0 * k2[i];
    const double t2 = 2.0 * k3[i] + k4[i];
    out[i] = y[i] + h6 * (t1 + t2);
  }
}

void matvec_neon(std::size_t rows, std::size_t cols, const double* a,
                 const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = 0.0;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    const float64x2_t vx = vdupq_n_f64(x[j]);
    const double* col = a + j * rows;
    std::size_t r = 0;
    for (; r + 2 <= rows; r += 2) {
      const float64x2_t vy = vld1q_f64(y + r);
      const float64x2_t va = vld1q_f64(col + r);
      vst1q_f64(y + r, vaddq_f64(vy, vmulq_f64(va, vx)));
    }
    for (; r < rows; ++r) {
      y[r] = y[r] + col[r] * x[j];
    }
  }
}

void matvec_t_neon(std::size_t rows, std::size_t cols, const double* a,
                   const double* x, double* y) {
  std::size_t j = 0;
  for (; j + 2 <= cols; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const double* c0 = a + (j + 0) * rows;
    const double* c1 = a + (j + 1) * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      double lane[2] = {c0[i], c1[i]};
      const float64x2_t va = vld1q_f64(lane);
      const float64x2_t vx = vdupq_n_f64(x[i]);
      acc = vaddq_f64(acc, vmulq_f64(va, vx));
    }
    vst1q_f64(y + j, acc);
  }
  for (; j < cols; ++j) {
    const double* col = a + j * rows;
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      acc = acc + col[i] * x[i];
    }
    y[j] = acc;
  }
}

void matmul_neon(std::size_t m, std::size_t k, std::size_t n, const double* a,
                 const double* b, double* c) {
  for (std::size_t z = 0; z < m * n; ++z) {
    c[z] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double* ccol = c + j * m;
    for (std::size_t l = 0; l < k; ++l) {
      const double blj = b[l + j * k];
      const float64x2_t vb = vdupq_n_f64(blj);
      const double* acol = a + l * m;
      std::size_t i = 0;
      for (; i + 2 <= m; i += 2) {
        const float64x2_t vc = vld1q_f64(ccol + i);
        const float64x2_t va = vld1q_f64(acol + i);
        vst1q_f64(ccol + i, vaddq_f64(vc, vmulq_f64(va, vb)));
      }
      for (; i < m; ++i) {
        ccol[i] = ccol[i] + acol[i] * blj;
      }
    }
  }
}

}  // namespace

const Ops neon_ops = {
    "neon",        axpy_neon,   add_scaled_neon, rk4_combine_neon,
    matvec_neon,   matvec_t_neon, matmul_neon,
};

}  // namespace cbqr::kernels
