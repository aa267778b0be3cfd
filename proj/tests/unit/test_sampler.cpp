#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gsbm/sampler.hpp"
#include "support.hpp"

using namespace gsbm;

namespace {

bool same_graph(const GsbmGraph& a, const GsbmGraph& b) {
  return a.size() == b.size() && std::equal(a.positions().begin(), a.positions().end(), b.positions().begin()) &&
         std::equal(a.labels().begin(), a.labels().end(), b.labels().begin()) && a.edges() == b.edges();
}

double poisson_pmf(double mean, int k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); }

// Upper 0.999 quantile of chi-square with k degrees of freedom
// (Wilson-Hilferty).
double chi2_999(int k) {
  const double z = 3.090232;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

}  // namespace

TEST_CASE("sampling is deterministic in the seed") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const GsbmGraph a = sample(3.0, 2000.0, p, 2, 77);
  const GsbmGraph b = sample(3.0, 2000.0, p, 2, 77);
  const GsbmGraph c = sample(3.0, 2000.0, p, 2, 78);
  CHECK(same_graph(a, b));
  CHECK_FALSE(same_graph(a, c));
}

TEST_CASE("graph invariants") {
  const Profile p = Profile::piecewise_linear({{0, 0.9}, {1, 0.2}}, {{0, 0.3}, {1, 0.6}}, 1.0);
  for (int d = 1; d <= 3; ++d) {
    const GsbmGraph g = sample(2.0, 800.0, p, d, 10 + d);
    CHECK(g.positions().size() == g.size() * d);
    for (VertexId v = 0; v < g.size(); ++v) {
      for (VertexId u : g.neighbors(v)) {
        CHECK(u != v);
        CHECK(g.has_edge(u, v));
        CHECK(testing::brute_distance(g, u, v) <= g.visibility_radius());
      }
      for (double x : g.position(v)) CHECK((x >= 0.0 && x < g.box().side));
    }
  }
  CHECK_THROWS(sample(1.0, 1.0, p, 1, 0));
  CHECK_THROWS(sample(0.0, 100.0, p, 1, 0));
}

TEST_CASE("vertex count mean") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    total += sample_positions(5.0, TorusBox::from_volume(1, 1000.0), rng).size();
  }
  CHECK(std::fabs(total / 100 - 5000.0) <= 3 * std::sqrt(5000.0));
  (void)p;
}

TEST_CASE("vertex count passes chi-square against Poisson") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const double mean = 2.0 * 10.0;
  std::vector<int> counts(200);
  for (int s = 0; s < 200; ++s) counts[s] = static_cast<int>(sample(2.0, 10.0, p, 1, 1000 + s).size());
  // Bins [0, 13], 14..27 individually, [28, inf): all expected counts >= 5.
  std::vector<std::pair<int, int>> bins{{0, 13}};
  for (int k = 14; k <= 27; ++k) bins.push_back({k, k});
  bins.push_back({28, 1000});
  double stat = 0.0;
  for (auto [lo, hi] : bins) {
    double prob = 0.0;
    for (int k = lo; k <= std::min(hi, 200); ++k) prob += poisson_pmf(mean, k);
    const double expected = 200 * prob;
    REQUIRE(expected >= 5.0);
    const auto observed = std::count_if(counts.begin(), counts.end(), [&](int c) { return c >= lo && c <= hi; });
    stat += (observed - expected) * (observed - expected) / expected;
  }
  CHECK(stat < chi2_999(static_cast<int>(bins.size()) - 1));
}

TEST_CASE("edge frequencies match the profile by label agreement and distance") {
  const Profile p = Profile::piecewise_linear({{0, 0.9}, {1, 0.6}}, {{0, 0.1}, {1, 0.5}}, 1.0);
  std::array<std::array<double, 10>, 2> trials{}, hits{}, expected{};
  std::size_t same_pairs = 0;
  for (std::uint64_t seed = 1; same_pairs < 100'000; ++seed) {
    const GsbmGraph g = sample(2.0, 10'000.0, p, 1, seed);
    const double radius = g.visibility_radius();
    for (VertexId v = 0; v < g.size(); ++v) {
      g.index().for_each_within(v, radius, Boundary::closed, [&](VertexId u, double dist) {
        if (u <= v) return;
        const int same = g.label(u) == g.label(v);
        const int decile = std::min(9, static_cast<int>(10 * dist / radius));
        const auto f = testing::brute_f(g, dist);
        trials[same][decile] += 1;
        hits[same][decile] += g.has_edge(u, v);
        expected[same][decile] += same ? f.in : f.out;
        same_pairs += same;
      });
    }
  }
  for (int same = 0; same < 2; ++same) {
    for (int decile = 0; decile < 10; ++decile) {
      const double n = trials[same][decile];
      const double pbar = expected[same][decile] / n;
      const double se = std::sqrt(pbar * (1 - pbar) / n);
      CHECK(std::fabs(hits[same][decile] / n - pbar) <= 3 * se);
    }
  }
}

TEST_CASE("same-community edge rate for a step profile") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  double pairs = 0, edges = 0;
  for (std::uint64_t seed = 1; pairs < 100'000; ++seed) {
    const GsbmGraph g = sample(2.0, 10'000.0, p, 1, seed);
    for (VertexId v = 0; v < g.size(); ++v) {
      g.index().for_each_within(v, g.visibility_radius(), Boundary::closed, [&](VertexId u, double) {
        if (u > v && g.label(u) == g.label(v)) {
          pairs += 1;
          edges += g.has_edge(u, v);
        }
      });
    }
  }
  CHECK(std::fabs(edges / pairs - 0.9) <= 0.01);
}

TEST_CASE("mean degree") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  CHECK(mean_degree(testing::make_graph(1, 100, p, {}, {}, {})) == 0.0);
  CHECK(mean_degree(testing::make_graph(1, 100, p, {1.0, 2.0}, {1, -1}, {})) == 0.0);
  CHECK(mean_degree(testing::make_graph(1, 100, p, {1.0, 2.0}, {1, -1}, {{0, 1}})) == 1.0);

  const Profile q = Profile::step(0.6, 0.4, 1.0);
  const GsbmGraph g = sample(2.0, 1e4, q, 1, 5);
  const double want = 2.0 * 2.0 * 1.0 * std::log(1e4) * 0.5;
  CHECK(std::fabs(mean_degree(g) - want) <= 0.1 * want);
}

TEST_CASE("graph file round trip") {
  const Profile p = Profile::piecewise_linear({{0, 0.9}, {0.4, 0.7}, {1, 0.2}}, {{0, 0.3}, {1, 0.6}}, 1.0);
  for (int d = 1; d <= 3; ++d) {
    const GsbmGraph g = sample(1.5, 300.0, p, d, 99);
    std::ostringstream first;
    write_graph(first, g);
    std::istringstream in(first.str());
    const GsbmGraph back = read_graph(in);
    CHECK(same_graph(g, back));
    CHECK(back.profile() == g.profile());
    CHECK(back.seed() == g.seed());
    CHECK(back.lambda() == g.lambda());
    std::ostringstream second;
    write_graph(second, back);
    CHECK(first.str() == second.str());
  }
}

TEST_CASE("malformed graph files are rejected") {
  const auto bad = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_graph(in), std::invalid_argument);
  };
  const std::string head = "gsbm v1 d=1 n=100 lambda=1 r=1 seed=0 count=2\np { kind = \"step\", a = 0.9, b = 0.1, r = 1 }\n";
  bad("");
  bad("graph v2\n");
  bad(head + "v 0 1.5 1\n");                       // too few vertices
  bad(head + "v 0 1.5 1\nv 1 2 7\n");              // bad label
  bad(head + "v 0 1.5 1\nv 1 200 1\n");            // outside the box
  bad(head + "v 0 1.5 1\nv 1 2 1\ne 1 0\n");       // lo > hi
  bad(head + "v 0 1.5 1\nv 1 50 1\ne 0 1\n");      // edge longer than the radius
  std::istringstream ok(head + "v 0 1.5 1\nv 1 2 -1\ne 0 1\n");
  CHECK(read_graph(ok).edge_count() == 1);
}
