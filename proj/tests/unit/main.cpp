// SPDX-License-Identifier: Apache-2.0
//
// doctest runner. --kernels=scalar|avx2|neon pins the SIMD level for the run.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <string>

#include "ivoro/simd/kernels.hpp"

int main(int argc, char** argv) {
  doctest::Context context;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--kernels=", 0) != 0) continue;
    const auto level = ivoro::simd::parse_level(arg.substr(10));
    if (!level || !ivoro::simd::is_supported(*level)) {
      std::fprintf(stderr, "kernel level %s not available\n", arg.c_str() + 10);
      return 2;
    }
    ivoro::simd::set_active_level(*level);
  }
  context.applyCommandLine(argc, argv);
  return context.run();
}
