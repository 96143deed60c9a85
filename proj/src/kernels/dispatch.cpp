#include <cstdlib>

#include "triglab/kernels.hpp"

namespace triglab::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Table& avx2_table();
#endif

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& active() {
  static const Table* chosen = [] {
    const char* env = std::getenv("TRIGLAB_NO_SIMD");
    bool forced_off = env && env[0] == '1';
#if defined(__x86_64__) || defined(_M_X64)
    if (!forced_off && avx2_available()) return &avx2_table();
#else
    (void)forced_off;
#endif
    return &scalar();
  }();
  return *chosen;
}

}  // namespace triglab::kernels
