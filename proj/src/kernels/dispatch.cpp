#include <array>
#include <cstdlib>
#include <string_view>

#include "auxsrp/kernels.hpp"

namespace auxsrp::kernels {

#if defined(AUXSRP_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_table() {
#if defined(AUXSRP_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

std::span<const KernelTable* const> available() {
  static const auto tables = [] {
    std::array<const KernelTable*, 2> t{&scalar_table(), nullptr};
    std::size_t n = 1;
    if (const auto* avx2 = avx2_table()) t[n++] = avx2;
    return std::pair{t, n};
  }();
  return {tables.first.data(), tables.second};
}

const KernelTable* find(std::string_view name) {
  for (const auto* t : available()) {
    if (name == t->name) return t;
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = []() -> const KernelTable& {
    if (const char* env = std::getenv("AUXSRP_KERNELS")) {
      if (const auto* t = find(env)) return *t;
    }
    const auto tables = available();
    return *tables[tables.size() - 1];
  }();
  return table;
}

}  // namespace auxsrp::kernels
