#include <atomic>
#include <cstdlib>
#include <cstring>

#include "fubini/errors.hpp"
#include "fubini/kernels.hpp"

namespace fubini::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("FUBINI_FORCE_SCALAR"); env && std::strcmp(env, "0") != 0) {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<int>& selected() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(FUBINI_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return static_cast<Isa>(selected().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw ConfigurationError("kernel variant not available on this CPU: " + std::string(isa_name(isa)));
  }
  selected().store(static_cast<int>(isa), std::memory_order_relaxed);
}

const KernelTable& table_for(Isa isa) {
#if defined(FUBINI_HAVE_AVX2)
  if (isa == Isa::Avx2) return avx2_table();
#endif
  (void)isa;
  return scalar_table();
}

const KernelTable& active() { return table_for(active_isa()); }

}  // namespace fubini::kernels
