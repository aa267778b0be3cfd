#include <doctest.h>

#include <cmath>

#include "gsbm/oracle.hpp"
#include "gsbm/partition.hpp"
#include "gsbm/recovery.hpp"
#include "support.hpp"

using namespace gsbm;

namespace {

// A vertex and the others within half the radius of it, so every pair is
// mutually visible. Capped at `cap` members.
std::vector<VertexId> visible_cluster(const GsbmGraph& g, VertexId center, std::size_t cap) {
  std::vector<VertexId> out{center};
  for (VertexId u = 0; u < g.size() && out.size() < cap; ++u) {
    if (u != center && testing::brute_distance(g, u, center) <= 0.5 * g.visibility_radius()) out.push_back(u);
  }
  return out;
}

std::vector<Label> random_sigma(Rng& rng, std::size_t count, bool zeros) {
  std::vector<Label> out(count);
  for (auto& s : out) {
    const auto pick = rng() % (zeros ? 3 : 2);
    s = pick == 0 ? Label{1} : pick == 1 ? Label{-1} : Label{0};
  }
  return out;
}

GsbmGraph with_labels(const GsbmGraph& g, std::vector<Label> labels) {
  return GsbmGraph(g.box(), g.lambda(), g.profile(), g.seed(), std::vector<double>(g.positions().begin(), g.positions().end()),
                   std::move(labels), g.edges());
}

}  // namespace

TEST_CASE("pairwise statistic matches the direct sum") {
  Rng rng(31);
  const Profile step = Profile::step(0.85, 0.2, 1.0);
  int instances = 0;
  for (int trial = 0; instances < 100; ++trial) {
    const Profile p = trial % 2 ? step : testing::random_pwl_profile(rng);
    const GsbmGraph g = sample(testing::uniform(rng, 1, 4), testing::uniform(rng, 100, 500), p, 1 + trial % 2, 700 + trial);
    if (g.size() < 3) continue;
    const auto block = visible_cluster(g, static_cast<VertexId>(rng() % g.size()), 50);
    const VertexId u0 = *std::min_element(block.begin(), block.end());
    for (VertexId v : block) {
      const double got = pairwise_statistic(g, block, u0, v);
      CHECK(std::fabs(got - testing::brute_X(g, block, u0, v)) <= 1e-12);
    }
    const auto labels = pairwise_classify(g, block);
    for (std::size_t i = 0; i < block.size(); ++i) {
      const double want = block[i] == u0 ? 1.0 : testing::brute_X(g, block, u0, block[i]);
      CHECK(labels[i] == (want >= 0 ? 1 : -1));
    }
    ++instances;
  }
}

TEST_CASE("closed-form alpha and marginal match the two conditionals") {
  Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    const Profile p = testing::random_pwl_profile(rng);
    const auto a = p.eval(testing::uniform(rng, 0, p.r()));
    const auto b = p.eval(testing::uniform(rng, 0, p.r()));
    const double same = 0.5 * (a.in * b.in + a.out * b.out);
    const double diff = 0.5 * (a.in * b.out + a.out * b.in);
    CHECK(std::fabs(0.25 * (a.in + a.out) * (b.in + b.out) - 0.5 * (same + diff)) <= 1e-12);
    CHECK(sign_of(a.diff() * b.diff()) == testing::brute_sign(same - diff));
  }
}

TEST_CASE("pairwise classify small blocks") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const GsbmGraph g = testing::make_graph(1, 100, p, {1.0, 1.5, 2.0}, {1, -1, 1}, {});
  const std::vector<VertexId> one{2};
  CHECK(pairwise_classify(g, one) == std::vector<Label>{1});
  const std::vector<VertexId> two{2, 0};
  CHECK(pairwise_statistic(g, two, 0, 2) == 0.0);
  CHECK(pairwise_classify(g, two) == std::vector<Label>{1, 1});
}

TEST_CASE("propagate statistic matches the direct sum") {
  Rng rng(33);
  int instances = 0;
  for (int trial = 0; instances < 100; ++trial) {
    const Profile p = trial % 3 ? testing::random_pwl_profile(rng) : Profile::step(0.8, 0.3, 1.0);
    const GsbmGraph g = sample(testing::uniform(rng, 1, 4), testing::uniform(rng, 100, 500), p, 1 + trial % 2, 900 + trial);
    if (g.size() < 4) continue;
    const auto cluster = visible_cluster(g, static_cast<VertexId>(rng() % g.size()), 60);
    if (cluster.size() < 4) continue;
    const std::size_t split = cluster.size() / 2;
    const std::vector<VertexId> parent(cluster.begin(), cluster.begin() + split);
    const std::vector<VertexId> child(cluster.begin() + split, cluster.end());
    const auto labels = random_sigma(rng, g.size(), trial % 4 == 0);
    const double eps = testing::uniform(rng, 0.01, 0.3);
    const auto out = propagate(g, parent, labels, child, eps);
    for (std::size_t i = 0; i < child.size(); ++i) {
      const double want = testing::brute_Y(g, parent, labels, child[i], eps);
      CHECK(std::fabs(propagate_statistic(g, parent, labels, child[i], eps) - want) <= 1e-12);
      CHECK(out[i] == (want >= 0 ? 1 : -1));
    }
    ++instances;
  }
}

TEST_CASE("propagate with no distinguishing parent ties to +1") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const GsbmGraph g = testing::make_graph(1, 100, p, {1.0, 1.5}, {1, -1}, {});
  const std::vector<VertexId> parent{0}, child{1};
  const std::vector<Label> labels{-1, 0};
  CHECK(propagate_statistic(g, parent, labels, 1, 0.95) == 0.0);
  CHECK(propagate(g, parent, labels, child, 0.95) == std::vector<Label>{1});
}

TEST_CASE("propagate recovers a same-community child under near-perfect separation") {
  const Profile p = Profile::step(0.99, 0.01, 1.0);
  Rng rng(34);
  std::vector<double> positions;
  for (int i = 0; i < 11; ++i) positions.push_back(10.0 + 0.05 * i);
  const std::vector<Label> labels(11, 1);
  std::vector<VertexId> parent(10);
  std::iota(parent.begin(), parent.end(), VertexId{0});
  const std::vector<VertexId> child{10};
  int correct = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Edge> edges;
    for (VertexId u = 0; u < 10; ++u) {
      if (rng.uniform() < 0.99) edges.push_back({u, 10});
    }
    const GsbmGraph g = testing::make_graph(1, 1000, p, positions, labels, edges);
    correct += propagate(g, parent, g.labels(), child, 0.5)[0] == 1;
  }
  CHECK(correct >= 990);
}

TEST_CASE("tau matches the direct sum") {
  Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const Profile p = trial % 2 ? testing::random_pwl_profile(rng) : Profile::step(0.7, 0.2, 1.0);
    const GsbmGraph g = sample(testing::uniform(rng, 1, 4), testing::uniform(rng, 100, 500), p, 1 + trial % 3, 1100 + trial);
    if (g.size() == 0) continue;
    const auto sigma = random_sigma(rng, g.size(), trial % 3 == 0);
    for (int k = 0; k < 5; ++k) {
      const VertexId v = static_cast<VertexId>(rng() % g.size());
      const double want = testing::brute_tau(g, sigma, v);
      CHECK(std::fabs(tau(g, sigma, v) - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
      CHECK(refine(g, sigma, v) == (want >= 0 ? 1 : -1));
    }
  }
}

TEST_CASE("tau examples") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const GsbmGraph lone = testing::make_graph(1, 100, p, {1.0, 50.0}, {1, 1}, {});
  CHECK(tau(lone, lone.labels(), 0) == 0.0);
  CHECK(refine(lone, lone.labels(), 0) == 1);
  const GsbmGraph pair = testing::make_graph(1, 100, p, {1.0, 1.5}, {1, 1}, {{0, 1}});
  CHECK(tau(pair, pair.labels(), 0) == doctest::Approx(std::log(9.0)).epsilon(1e-15));
  const std::vector<Label> against{-1, -1};
  CHECK(refine(pair, against, 1) == -1);
}

TEST_CASE("refine with true labels is the genie") {
  Rng rng(36);
  for (int trial = 0; trial < 100; ++trial) {
    const Profile p = testing::random_pwl_profile(rng);
    const GsbmGraph g = sample(testing::uniform(rng, 1, 3), testing::uniform(rng, 50, 300), p, 1 + trial % 2, 1300 + trial);
    for (VertexId v = 0; v < g.size(); ++v) REQUIRE(refine(g, g.labels(), v) == genie_label(g, v));
  }
}

TEST_CASE("agreement") {
  const std::vector<Label> a{1, 1, 1, 1}, b{1, 1, -1, -1}, c{-1, -1, -1, -1}, z{0, 1, 1, 1};
  CHECK(agreement(a, a) == 1.0);
  CHECK(agreement(a, c) == 1.0);
  CHECK(agreement(a, b) == 0.5);
  CHECK(agreement(z, a) == 0.75);
  CHECK(agreement(std::vector<Label>{}, std::vector<Label>{}) == 1.0);
  CHECK_THROWS(agreement(a, std::vector<Label>{1}));
}

TEST_CASE("single occupied block runs pairwise classify then refine") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  Rng rng(37);
  std::vector<double> positions;
  std::vector<Label> labels;
  for (int i = 0; i < 12; ++i) {
    positions.push_back(0.05 + 0.1 * i);
    labels.push_back(i % 3 ? Label{1} : Label{-1});
  }
  std::vector<Edge> edges;
  for (VertexId u = 0; u < 12; ++u) {
    for (VertexId v = u + 1; v < 12; ++v) {
      if (rng.uniform() < (labels[u] == labels[v] ? 0.9 : 0.1)) edges.push_back({u, v});
    }
  }
  // n = 30: side 30, log n = 3.4, with chi = 0.9 the grid has 9 blocks of side 3.33.
  const GsbmGraph g = testing::make_graph(1, 30, p, positions, labels, edges);
  const RecoveryOutcome out = run_exact_recovery(g, 0.9, 0.5);
  REQUIRE(out.status == RecoveryStatus::ok);
  CHECK(out.occupied_blocks == 1);
  std::vector<VertexId> block(12);
  std::iota(block.begin(), block.end(), VertexId{0});
  CHECK(out.phase1.values == pairwise_classify(g, block));
  for (VertexId v = 0; v < 12; ++v) CHECK(out.labeling.values[v] == refine(g, out.phase1.values, v));
  CHECK(out.labeling.phase == Phase::phase2);
}

TEST_CASE("disconnected visibility graph fails but still labels") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  std::vector<double> positions{1.0, 1.1, 1.2, 500.0, 500.1, 500.2};
  const GsbmGraph g = testing::make_graph(1, 1000, p, positions, {1, 1, -1, 1, -1, -1}, {{0, 1}, {3, 4}});
  const RecoveryOutcome out = run_exact_recovery(g, 0.2, 0.1);
  CHECK(out.status == RecoveryStatus::fail_disconnected);
  for (Label s : out.phase1.values) CHECK(s == 0);
  for (Label s : out.labeling.values) CHECK(s == 1);
  CHECK(status_name(out.status) == "fail_disconnected");
}

TEST_CASE("recovery is equivariant under a global label flip") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GsbmGraph g = sample(4.0, 3000.0, p, 1, 40 + seed);
    std::vector<Label> flipped(g.labels().begin(), g.labels().end());
    for (auto& s : flipped) s = static_cast<Label>(-s);
    const GsbmGraph h = with_labels(g, flipped);
    const auto a = run_exact_recovery(g, 0.36, 0.15);
    const auto b = run_exact_recovery(h, 0.36, 0.15);
    CHECK(agreement(a.labeling.values, b.labeling.values) == 1.0);
    CHECK(a.mistakes_phase1 == b.mistakes_phase1);
    CHECK(a.max_block_mistakes_phase1 <= a.mistakes_phase1);
  }
}

TEST_CASE("recovery is deterministic and exact on an easy instance") {
  const Profile p = Profile::step(0.9, 0.1, 1.0);
  const GsbmGraph g = sample(4.0, 5000.0, p, 1, 3);
  const auto a = run_exact_recovery(g, 0.36, 0.15);
  const auto b = run_exact_recovery(g, 0.36, 0.15);
  CHECK(a.labeling.values == b.labeling.values);
  REQUIRE(a.status == RecoveryStatus::ok);
  CHECK(agreement(a.labeling.values, g.labels()) == 1.0);
  CHECK(a.runtime_breakdown.size() == 4);
}
