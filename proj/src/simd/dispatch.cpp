#include "tcljump/simd/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace tcljump::simd {

namespace detail {
#ifndef TCLJUMP_WITH_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif
#ifndef TCLJUMP_WITH_NEON
const KernelTable* neon_table() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(TCLJUMP_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const KernelTable* t = detail::avx2_table(); t != nullptr && cpu_has_avx2()) {
    out.push_back(t);
  }
  // NEON is architectural on aarch64.
  if (const KernelTable* t = detail::neon_table(); t != nullptr) out.push_back(t);
  return out;
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* env = std::getenv("TCLJUMP_SIMD"); env != nullptr) {
      if (std::string_view(env) == "scalar") return scalar_kernels();
    }
    return *available_kernels().back();
  }();
  return chosen;
}

}  // namespace tcljump::simd
