#include "gsbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gsbm {

namespace {

double visibility_radius_for(const Profile& profile, const TorusBox& box) {
  return profile.r() * distance_scale(box.n, box.d);
}

}  // namespace

GsbmGraph::GsbmGraph(TorusBox box, double lambda, Profile profile, std::uint64_t seed,
                     std::vector<double> positions, std::vector<Label> labels, std::vector<Edge> edges)
    : box_(box),
      lambda_(lambda),
      profile_(std::move(profile)),
      seed_(seed),
      radius_(visibility_radius_for(profile_, box)),
      positions_(std::move(positions)),
      labels_(std::move(labels)),
      index_(box_, positions_, radius_) {
  const std::size_t count = labels_.size();
  if (positions_.size() != count * static_cast<std::size_t>(box_.d)) {
    throw std::invalid_argument("positions and labels disagree on the vertex count");
  }
  if (count > std::numeric_limits<VertexId>::max()) throw std::invalid_argument("too many vertices");
  for (Label l : labels_) {
    if (l != 1 && l != -1) throw std::invalid_argument("labels must be +1 or -1");
  }

  offsets_.assign(count + 1, 0);
  for (const auto& [lo, hi] : edges) {
    if (lo >= hi || hi >= count) throw std::invalid_argument("edge endpoints must satisfy lo < hi < count");
    ++offsets_[lo + 1];
    ++offsets_[hi + 1];
  }
  for (std::size_t v = 0; v < count; ++v) offsets_[v + 1] += offsets_[v];
  adjacency_.resize(offsets_[count]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [lo, hi] : edges) {
    adjacency_[fill[lo]++] = hi;
    adjacency_[fill[hi]++] = lo;
  }
  for (std::size_t v = 0; v < count; ++v) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw std::invalid_argument("duplicate edge");
  }
}

bool GsbmGraph::has_edge(VertexId u, VertexId v) const {
  const auto list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> GsbmGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId v = 0; v < size(); ++v) {
    for (VertexId u : neighbors(v)) {
      if (u > v) out.emplace_back(v, u);
    }
  }
  return out;
}

std::vector<double> sample_positions(double lambda, const TorusBox& box, Rng& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  std::poisson_distribution<std::uint64_t> count_dist(lambda * box.n);
  const std::uint64_t count = count_dist(rng);
  if (count > std::numeric_limits<VertexId>::max()) throw std::invalid_argument("too many vertices");
  std::vector<double> positions(count * box.d);
  for (double& x : positions) {
    x = rng.uniform() * box.side;
    if (x >= box.side) x = std::nextafter(box.side, 0.0);
  }
  return positions;
}

double pair_uniform(std::uint64_t edge_seed, VertexId u, VertexId v) {
  const std::uint64_t lo = std::min(u, v);
  const std::uint64_t hi = std::max(u, v);
  return to_unit(mix64(edge_seed ^ mix64((lo << 32) | hi)));
}

GsbmGraph sample(double lambda, double n, const Profile& profile, int d, std::uint64_t seed) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(n > 1.0)) throw std::invalid_argument("invalid scale: n must exceed 1");
  const TorusBox box = TorusBox::from_volume(d, n);

  Rng rng(seed);
  std::poisson_distribution<std::uint64_t> count_dist(lambda * n);
  const std::uint64_t count = count_dist(rng);
  if (count > std::numeric_limits<VertexId>::max()) throw std::invalid_argument("too many vertices");
  std::vector<double> positions(count * d);
  std::vector<Label> labels(count);
  for (std::uint64_t v = 0; v < count; ++v) {
    for (int k = 0; k < d; ++k) {
      double x = rng.uniform() * box.side;
      if (x >= box.side) x = std::nextafter(box.side, 0.0);
      positions[v * d + k] = x;
    }
    labels[v] = rng.uniform() < 0.5 ? Label{1} : Label{-1};
  }

  const ScaledProfile scaled(profile, n, d);
  const double radius = scaled.visibility_radius();
  const CellIndex index(box, positions, radius);
  const std::uint64_t edge_seed = derive_seed(seed, 1);
  std::vector<Edge> edges;
  for (VertexId v = 0; v < count; ++v) {
    index.for_each_within(v, radius, Boundary::closed, [&](VertexId u, double dist) {
      if (u <= v) return;
      const EdgeProbabilities f = scaled.eval(dist);
      const double p = labels[u] == labels[v] ? f.in : f.out;
      if (pair_uniform(edge_seed, v, u) < p) edges.emplace_back(v, u);
    });
  }
  return GsbmGraph(box, lambda, profile, seed, std::move(positions), std::move(labels), std::move(edges));
}

double mean_degree(const GsbmGraph& graph) {
  if (graph.size() == 0) return 0.0;
  return 2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(graph.size());
}

}  // namespace gsbm
