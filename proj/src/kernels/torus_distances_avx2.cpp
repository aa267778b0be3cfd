// Compiled with -mavx2 (no -mfma): mul and add stay separate so lanes round
// exactly like the scalar reference.

#include <immintrin.h>

#include "gsbm/kernels.hpp"

namespace gsbm::kernels {

void torus_distances_avx2(const double* const* axes, int d, std::size_t count,
                          const double* query, double side, double* out) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d side_v = _mm256_set1_pd(side);

  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < d; ++k) {
      const __m256d x = _mm256_loadu_pd(axes[k] + i);
      const __m256d sep = _mm256_andnot_pd(sign_mask, _mm256_sub_pd(x, _mm256_set1_pd(query[k])));
      const __m256d wrapped = _mm256_sub_pd(side_v, sep);
      // min_pd(a, b) yields b unless a < b: wrapped when wrapped < sep.
      const __m256d m = _mm256_min_pd(wrapped, sep);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(m, m));
    }
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  if (i < count) {
    const double* tail[8];
    for (int k = 0; k < d; ++k) tail[k] = axes[k] + i;
    torus_distances_scalar(tail, d, count - i, query, side, out + i);
  }
}

}  // namespace gsbm::kernels
