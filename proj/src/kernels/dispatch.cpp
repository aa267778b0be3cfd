#include <cstdlib>
#include <string_view>

#include "gsbm/kernels.hpp"

namespace gsbm::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = [] {
    if (const char* forced = std::getenv("GSBM_ISA"); forced && std::string_view(forced) == "scalar") {
      return Isa::scalar;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

TorusDistancesFn torus_distances(Isa isa) {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return &torus_distances_avx2;
#endif
  (void)isa;
  return &torus_distances_scalar;
}

TorusDistancesFn torus_distances() {
  static const TorusDistancesFn fn = torus_distances(active_isa());
  return fn;
}

}  // namespace gsbm::kernels
