// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace ivoro::simd {

#ifdef IVORO_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace avx2
#endif

#ifdef IVORO_HAVE_NEON
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace neon
#endif

}  // namespace ivoro::simd
