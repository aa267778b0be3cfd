#include <cmath>

#include "gsbm/kernels.hpp"

namespace gsbm::kernels {

void torus_distances_scalar(const double* const* axes, int d, std::size_t count,
                            const double* query, double side, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
      const double sep = std::abs(axes[k][i] - query[k]);
      const double wrapped = side - sep;
      const double m = wrapped < sep ? wrapped : sep;
      acc = acc + m * m;
    }
    out[i] = std::sqrt(acc);
  }
}

}  // namespace gsbm::kernels
