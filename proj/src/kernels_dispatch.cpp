#include "cbqr/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace cbqr::kernels {
namespace {

Lane parse_env_lane(const char* value, Lane fallback) {
  if (value == nullptr || std::strcmp(value, "auto") == 0) {
    return fallback;
  }
  if (std::strcmp(value, "scalar") == 0) {
    return Lane::kScalar;
  }
  if (std::strcmp(value, "avx2") == 0) {
    return Lane::kAvx2;
  }
  if (std::strcmp(value, "neon") == 0) {
    return Lane::kNeon;
  }
  return fallback;
}

Lane initial_lane() {
  const Lane best = detect_best_lane();
  const Lane wanted = parse_env_lane(std::getenv("CBQR_KERNELS"), best);
  return lane_supported(wanted) ? wanted : best;
}

std::atomic<Lane>& lane_slot() {
  static std::atomic<Lane> lane{initial_lane()};
  return lane;
}

}  // namespace

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::kScalar:
      return "scalar";
    case Lane::kAvx2:
      return "avx2";
    case Lane::kNeon:
      return "neon";
  }
  return "?";
}

bool lane_supported(Lane lane) {
  switch (lane) {
    case Lane::kScalar:
      return true;
    case Lane::kAvx2:
#if defined(CBQR_HAVE_AVX2_LANE)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Lane::kNeon:
#if defined(CBQR_HAVE_NEON_LANE)
      return true;  // baseline on arm64 builds
#else
      return false;
#endif
  }
  return false;
}

Lane detect_best_lane() {
#if defined(CBQR_HAVE_AVX2_LANE)
  if (lane_supported(Lane::kAvx2)) {
    return Lane::kAvx2;
  }
#endif
#if defined(CBQR_HAVE_NEON_LANE)
  if (lane_supported(Lane::kNeon)) {
    return Lane::kNeon;
  }
#endif
  return Lane::kScalar;
}

const Ops& ops_for(Lane lane) {
  switch (lane) {
#if defined(CBQR_HAVE_AVX2_LANE)
    case Lane::kAvx2:
      return avx2_ops;
#endif
#if defined(CBQR_HAVE_NEON_LANE)
    case Lane::kNeon:
      return neon_ops;
#endif
    default:
      return scalar_ops;
  }
}

bool set_lane(Lane lane) {
  if (!lane_supported(lane)) {
    return false;
  }
  lane_slot().store(lane, std::memory_order_relaxed);
  return true;
}

Lane active_lane() { return lane_slot().load(std::memory_order_relaxed); }

const Ops& active() { return ops_for(active_lane()); }

}  // namespace cbqr::kernels
