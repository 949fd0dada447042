#include "cbqr/kernels.hpp"

#include <immintrin.h>

// AVX2 lane, 4 doubles per vector. Vectorization runs across independent
// output elements; per-output reduction order matches the scalar lane, and
// multiplies/adds are kept separate (no FMA) so results are bit-identical
// to the scalar reference. Tails fall back to the scalar expressions.

namespace cbqr::kernels {
namespace {

void axpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) {
    y[i] = y[i] + alpha * x[i];
  }
}

void add_scaled_avx2(std::size_t n, const double* y, double alpha,
                     const double* x, double* out) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < n; ++i) {
    out[i] = y[i] + alpha * x[i];
  }
}

void rk4_combine_avx2(std::size_t n, const double* y, double h6,
                      const double* k1, const double* k2, const double* k3,
                      const double* k4, double* out) {
  const __m256d vh6 = _mm256_set1_pd(h6);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v1 = _mm256_loadu_pd(k1 + i);
    const __m256d v2 = _mm256_loadu_pd(k2 + i);
    const __m256d v3 = _mm256_loadu_pd(k3 + i);
    const __m256d v4 = _mm256_loadu_pd(k4 + i);
    const __m256d t1 = _mm256_add_pd(v1, _mm256_mul_pd(two, v2));
    const __m256d t2 = _mm256_add_pd(_mm256_mul_pd(two, v3), v4);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(out + i,
                     _mm256_add_pd(vy, _mm256_mul_pd(vh6, _mm256_add_pd(t1, t2))));
  }
  for (; i < n; ++i) {
    const double t1 = k1[i] + 2.0 * k2[i];
    const double t2 = 2.0 * k3[i] + k4[i];
    out[i] = y[i] + h6 * (t1 + t2);
  }
}

void matvec_avx2(std::size_t rows, std::size_t cols, const double* a,
                 const double* x, double* y) {
  std::size_t i = 0;
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= rows; i += 4) {
    _mm256_storeu_pd(y + i, zero);
  }
  for (; i < rows; ++i) {
    y[i] = 0.0;
  }
  for (std::size_t j = 0; j < cols; ++j) {
    const __m256d vx = _mm256_set1_pd(x[j]);
    const double* col = a + j * rows;
    std::size_t r = 0;
    for (; r + 4 <= rows; r += 4) {
      const __m256d vy = _mm256_loadu_pd(y + r);
      const __m256d va = _mm256_loadu_pd(col + r);
      _mm256_storeu_pd(y + r, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; r < rows; ++r) {
      y[r] = y[r] + col[r] * x[j];
    }
  }
}

void matvec_t_avx2(std::size_t rows, std::size_t cols, const double* a,
                   const double* x, double* y) {
  std::size_t j = 0;
  for (; j + 4 <= cols; j += 4) {
    // Four column reductions in parallel; each lane keeps the scalar
    // low-to-high accumulation order over i.
    __m256d acc = _mm256_setzero_pd();
    const double* c0 = a + (j + 0) * rows;
    const double* c1 = a + (j + 1) * rows;
    const double* c2 = a + (j + 2) * rows;
    const double* c3 = a + (j + 3) * rows;
    for (std::size_t i = 0; i < rows; ++i) {
      const __m256d va = _mm256_set_pd(c3[i], c2[i], c1[i], c0[i]);
      const __m256d vx = _mm256_set1_pd(x[i]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vx));
    }
    _mm256_storeu_pd(y + j, acc);
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

void matmul_avx2(std::size_t m, std::size_t k, std::size_t n, const double* a,
                 const double* b, double* c) {
  std::size_t z = 0;
  const __m256d zero = _mm256_setzero_pd();
  for (; z + 4 <= m * n; z += 4) {
    _mm256_storeu_pd(c + z, zero);
  }
  for (; z < m * n; ++z) {
    c[z] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double* ccol = c + j * m;
    for (std::size_t l = 0; l < k; ++l) {
      const double blj = b[l + j * k];
      const __m256d vb = _mm256_set1_pd(blj);
      const double* acol = a + l * m;
      std::size_t i = 0;
      for (; i + 4 <= m; i += 4) {
        const __m256d vc = _mm256_loadu_pd(ccol + i);
        const __m256d va = _mm256_loadu_pd(acol + i);
        _mm256_storeu_pd(ccol + i, _mm256_add_pd(vc, _mm256_mul_pd(va, vb)));
      }
      for (; i < m; ++i) {
        ccol[i] = ccol[i] + acol[i] * blj;
      }
    }
  }
}

}  // namespace

const Ops avx2_ops = {
    "avx2",        axpy_avx2,   add_scaled_avx2, rk4_combine_avx2,
    matvec_avx2,   matvec_t_avx2, matmul_avx2,
};

}  // namespace cbqr::kernels
