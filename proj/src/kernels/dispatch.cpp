#include <cstdlib>
#include <string>

#include "pdm/kernels.hpp"

namespace pdm::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(PDM_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() {
  if (const char* env = std::getenv("PDM_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return Isa::Scalar;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: {
      static const bool ok = cpu_has_avx2_fma();
      return ok;
    }
    case Isa::Neon:
#if defined(PDM_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table(Isa isa) {
  switch (isa) {
#if defined(PDM_HAVE_AVX2_KERNELS)
    case Isa::Avx2:
      if (isa_available(Isa::Avx2)) return detail::avx2_table();
      break;
#endif
#if defined(PDM_HAVE_NEON_KERNELS)
    case Isa::Neon: return detail::neon_table();
#endif
    default: break;
  }
  return detail::scalar_table();
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

}  // namespace pdm::kernels
