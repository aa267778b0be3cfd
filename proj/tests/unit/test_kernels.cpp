#include <doctest.h>

#include <cstring>
#include <vector>

#include "gsbm/kernels.hpp"
#include "gsbm/geometry.hpp"
#include "support.hpp"

using namespace gsbm;
using namespace gsbm::kernels;

namespace {

struct Batch {
  int d;
  double side;
  std::vector<std::vector<double>> axes;
  std::vector<double> query;
};

Batch random_batch(Rng& rng, int d, std::size_t count) {
  Batch b{d, testing::uniform(rng, 1.0, 1e4), {}, {}};
  b.axes.assign(d, std::vector<double>(count));
  for (auto& axis : b.axes) {
    for (double& x : axis) {
      // Mix in boundary values so the wrap branch is exercised on ties.
      const auto pick = rng() % 8;
      x = pick == 0 ? 0.0 : pick == 1 ? std::nextafter(b.side, 0.0) : rng.uniform() * b.side;
    }
  }
  for (int k = 0; k < d; ++k) b.query.push_back(rng() % 5 == 0 ? b.side / 2 : rng.uniform() * b.side);
  return b;
}

std::vector<double> run(TorusDistancesFn fn, const Batch& b) {
  std::vector<const double*> ptrs;
  for (const auto& axis : b.axes) ptrs.push_back(axis.data());
  std::vector<double> out(b.axes[0].size());
  fn(ptrs.data(), b.d, out.size(), b.query.data(), b.side, out.data());
  return out;
}

}  // namespace

TEST_CASE("scalar kernel matches the pairwise torus distance") {
  Rng rng(5);
  for (int d = 1; d <= kMaxDim; ++d) {
    const Batch b = random_batch(rng, d, 37);
    const auto out = run(torus_distances_scalar, b);
    const TorusBox box{d, b.side, 1.0};
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::vector<double> p(d);
      for (int k = 0; k < d; ++k) p[k] = b.axes[k][i];
      CHECK(out[i] == torus_distance(p, b.query, box));
    }
  }
}

TEST_CASE("every available kernel is bitwise equal to the scalar reference") {
  Rng rng(6);
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!isa_available(isa)) {
      MESSAGE("skipping unavailable variant " << isa_name(isa));
      continue;
    }
    const TorusDistancesFn fn = torus_distances(isa);
    for (int trial = 0; trial < 500; ++trial) {
      const int d = 1 + trial % kMaxDim;
      const std::size_t count = rng() % 70;
      if (count == 0) continue;
      const Batch b = random_batch(rng, d, count);
      const auto want = run(torus_distances_scalar, b);
      const auto got = run(fn, b);
      REQUIRE(std::memcmp(want.data(), got.data(), count * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("active variant is one of the available ones") {
  CHECK(isa_available(active_isa()));
  CHECK(isa_available(Isa::scalar));
}
