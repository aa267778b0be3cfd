#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference and, where
// the target supports it, a SIMD variant; the variant is picked once at
// runtime from CPU features and must agree bit-for-bit with the reference.

namespace gsbm::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Whether this build contains the variant and the CPU can run it.
bool isa_available(Isa isa);

/// Best available ISA, unless GSBM_ISA=scalar is set in the environment.
Isa active_isa();

/// Toroidal distances from `query` to `count` points stored axis-major:
/// axes[k][i] is coordinate k of point i. Per axis the separation is
/// min(|x - q|, side - |x - q|); squares are accumulated in axis order and
/// no fused multiply-add is used, so all variants round identically.
using TorusDistancesFn = void (*)(const double* const* axes, int d, std::size_t count,
                                  const double* query, double side, double* out);

void torus_distances_scalar(const double* const* axes, int d, std::size_t count,
                            const double* query, double side, double* out);

#if defined(__x86_64__) || defined(_M_X64)
void torus_distances_avx2(const double* const* axes, int d, std::size_t count,
                          const double* query, double side, double* out);
#endif

TorusDistancesFn torus_distances(Isa isa);

/// Variant for active_isa(), resolved once.
TorusDistancesFn torus_distances();

}  // namespace gsbm::kernels
