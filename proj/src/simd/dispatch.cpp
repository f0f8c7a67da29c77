// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace ivoro::simd {

namespace {

constexpr KernelTable kScalar{KernelLevel::scalar, scalar::dot, scalar::squared_l2, scalar::axpy};
#ifdef IVORO_HAVE_AVX2
constexpr KernelTable kAvx2{KernelLevel::avx2, avx2::dot, avx2::squared_l2, avx2::axpy};
#endif
#ifdef IVORO_HAVE_NEON
constexpr KernelTable kNeon{KernelLevel::neon, neon::dot, neon::squared_l2, neon::axpy};
#endif

const KernelTable* best_table() {
#ifdef IVORO_HAVE_AVX2
  if (is_supported(KernelLevel::avx2)) return &kAvx2;
#endif
#ifdef IVORO_HAVE_NEON
  if (is_supported(KernelLevel::neon)) return &kNeon;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view to_string(KernelLevel level) {
  switch (level) {
    case KernelLevel::scalar: return "scalar";
    case KernelLevel::avx2: return "avx2";
    case KernelLevel::neon: return "neon";
  }
  return "unknown";
}

std::optional<KernelLevel> parse_level(std::string_view name) {
  if (name == "scalar") return KernelLevel::scalar;
  if (name == "avx2") return KernelLevel::avx2;
  if (name == "neon") return KernelLevel::neon;
  return std::nullopt;
}

bool is_supported(KernelLevel level) {
  switch (level) {
    case KernelLevel::scalar: return true;
    case KernelLevel::avx2:
#if defined(IVORO_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case KernelLevel::neon:
#ifdef IVORO_HAVE_NEON
      return true;  // baseline on AArch64
#else
      return false;
#endif
  }
  return false;
}

std::vector<KernelLevel> supported_levels() {
  std::vector<KernelLevel> out;
  for (auto level : {KernelLevel::scalar, KernelLevel::avx2, KernelLevel::neon}) {
    if (is_supported(level)) out.push_back(level);
  }
  return out;
}

const KernelTable& kernels_for(KernelLevel level) {
  if (!is_supported(level)) {
    throw ConfigError("SIMD kernel level '" + std::string(to_string(level)) +
                      "' is not available on this build/CPU");
  }
  switch (level) {
#ifdef IVORO_HAVE_AVX2
    case KernelLevel::avx2: return kAvx2;
#endif
#ifdef IVORO_HAVE_NEON
    case KernelLevel::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void set_active_level(KernelLevel level) {
  active_slot().store(&kernels_for(level), std::memory_order_relaxed);
}

}  // namespace ivoro::simd
