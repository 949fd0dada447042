#pragma once

#include <cstddef>

// Dispatchable inner-loop kernels.
//
// Every routine exists as a scalar reference implementation and, where the
// build target supports it, as a SIMD variant (AVX2 on x86-64, NEON on
// arm64). The lane is picked once at startup from CPU capabilities and can
// be forced with the CBQR_KERNELS environment variable ("scalar", "avx2",
// "neon", "auto").
//
// All lanes are bit-for-bit equivalent: the SIMD variants vectorize across
// independent output elements and keep the reduction order of every output
// identical to the scalar code (no FMA contraction in any lane; kernel
// translation units are compiled with -ffp-contract=off). The equivalence
// suite asserts exact equality on random inputs.
//
// Matrices are dense column-major: element (i, j) of an r x c matrix lives
// at a[i + j*r].

namespace cbqr::kernels {

struct Ops {
  const char* name;

  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);

  // out = y + alpha * x   (out may alias neither input? aliasing with y is allowed)
  void (*add_scaled)(std::size_t n, const double* y, double alpha,
                     const double* x, double* out);

  // out = y + h6 * ((k1 + 2*k2) + (2*k3 + k4))
  void (*rk4_combine)(std::size_t n, const double* y, double h6,
                      const double* k1, const double* k2, const double* k3,
                      const double* k4, double* out);

  // y = A x          (A is rows x cols)
  void (*matvec)(std::size_t rows, std::size_t cols, const double* a,
                 const double* x, double* y);

  // y = A^T x        (A is rows x cols, y has cols entries)
  void (*matvec_t)(std::size_t rows, std::size_t cols, const double* a,
                   const double* x, double* y);

  // C = A B          (A is m x k, B is k x n, C is m x n)
  void (*matmul)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                 const double* b, double* c);
};

enum class Lane { kScalar, kAvx2, kNeon };

const char* lane_name(Lane lane);

/// True when the lane is compiled in and the CPU can run it.
bool lane_supported(Lane lane);

/// Best supported lane on this host.
Lane detect_best_lane();

/// Kernel table for an explicitly chosen lane (must be supported).
const Ops& ops_for(Lane lane);

/// Force the active lane. Returns false (and leaves the lane unchanged)
/// when the request is not supported on this host.
bool set_lane(Lane lane);

Lane active_lane();

/// Table currently in use by the linear-algebra layer.
const Ops& active();

// Reference tables (always present; used by the equivalence tests).
extern const Ops scalar_ops;
#if defined(CBQR_HAVE_AVX2_LANE)
extern const Ops avx2_ops;
#endif
#if defined(CBQR_HAVE_NEON_LANE)
extern const Ops neon_ops;
#endif

}  // namespace cbqr::kernels
