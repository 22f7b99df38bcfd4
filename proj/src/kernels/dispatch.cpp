#include <cstdlib>
#include <string_view>

#include <crossinggram/kernels.hpp>

namespace crossinggram::kernels {

#if defined(CROSSINGGRAM_HAVE_AVX2)
const KernelTable& avx2_kernels_unchecked() noexcept;
#endif

const KernelTable* avx2_kernels() noexcept {
#if defined(CROSSINGGRAM_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
  static const KernelTable& table = []() -> const KernelTable& {
    if (const char* env = std::getenv("CROSSINGGRAM_SIMD"); env && std::string_view(env) == "scalar") {
      return scalar_kernels();
    }
    if (const auto* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace crossinggram::kernels
