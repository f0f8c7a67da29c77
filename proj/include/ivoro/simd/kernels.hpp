// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense double-precision inner loops used by every distance and logit
// computation in the engine. Each kernel has a scalar reference version and
// optional vectorized variants; one table is selected at runtime.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ivoro::simd {

enum class KernelLevel { scalar, avx2, neon };

std::string_view to_string(KernelLevel level);
/// "scalar", "avx2" or "neon".
std::optional<KernelLevel> parse_level(std::string_view name);

struct KernelTable {
  KernelLevel level;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

/// True when the running CPU can execute kernels of the given level.
bool is_supported(KernelLevel level);

/// Every level compiled into this build and executable on this CPU.
std::vector<KernelLevel> supported_levels();

/// Kernel table for an explicit level; throws ConfigError if unsupported.
const KernelTable& kernels_for(KernelLevel level);

/// Currently active table. Defaults to the best supported level.
const KernelTable& active();

/// Overrides the active level process-wide. Not thread-safe with respect to
/// concurrently running kernels; call during setup.
void set_active_level(KernelLevel level);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_l2(std::span<const double> a, std::span<const double> b) {
  return active().squared_l2(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace ivoro::simd
