#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "gsbm/geometry.hpp"
#include "gsbm/profile.hpp"
#include "gsbm/rng.hpp"

namespace gsbm {

using Label = std::int8_t;
using Edge = std::pair<VertexId, VertexId>;

/// A sampled instance: positions, hidden labels and the observed edges.
///
/// Adjacency is stored in CSR form with every neighbor list sorted. The
/// graph also owns a cell index over its positions, built at the
/// visibility radius, which the partition, recovery and oracle code query.
class GsbmGraph {
 public:
  /// `edges` may be in any order; each pair must have lo < hi.
  GsbmGraph(TorusBox box, double lambda, Profile profile, std::uint64_t seed,
            std::vector<double> positions, std::vector<Label> labels, std::vector<Edge> edges);

  std::size_t size() const { return labels_.size(); }
  int d() const { return box_.d; }
  double n() const { return box_.n; }
  const TorusBox& box() const { return box_; }
  double lambda() const { return lambda_; }
  const Profile& profile() const { return profile_; }
  std::uint64_t seed() const { return seed_; }
  double visibility_radius() const { return radius_; }

  /// The profile at this graph's length scale. The result points into the
  /// graph and must not outlive it.
  ScaledProfile scaled() const { return ScaledProfile(profile_, box_.n, box_.d); }

  std::span<const double> positions() const { return positions_; }
  std::span<const double> position(VertexId v) const {
    return {positions_.data() + static_cast<std::size_t>(v) * box_.d, static_cast<std::size_t>(box_.d)};
  }
  std::span<const Label> labels() const { return labels_; }
  Label label(VertexId v) const { return labels_[v]; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  bool has_edge(VertexId u, VertexId v) const;
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  /// All edges as (lo, hi), sorted.
  std::vector<Edge> edges() const;

  double distance(VertexId u, VertexId v) const { return torus_distance(position(u), position(v), box_); }
  const CellIndex& index() const { return index_; }

 private:
  TorusBox box_;
  double lambda_;
  Profile profile_;
  std::uint64_t seed_;
  double radius_;
  std::vector<double> positions_;
  std::vector<Label> labels_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> adjacency_;
  CellIndex index_;
};

/// Poisson(lambda * box.n) many points, uniform on the box, row-major.
/// Drawn from `rng` in the order: count, then d coordinates per vertex.
std::vector<double> sample_positions(double lambda, const TorusBox& box, Rng& rng);

/// Draws one instance. Stream layout for a given seed:
///  - main stream Rng(seed): vertex count, then per vertex its d coordinates
///    followed by its label;
///  - each visible pair {lo, hi} decides its edge from its own counter-based
///    uniform keyed by (derive_seed(seed, 1), lo, hi).
/// The result therefore does not depend on the order pairs are visited.
GsbmGraph sample(double lambda, double n, const Profile& profile, int d, std::uint64_t seed);

/// The uniform in [0, 1) that decides the pair {u, v}.
double pair_uniform(std::uint64_t edge_seed, VertexId u, VertexId v);

/// 2|E|/|V|, or 0 for the empty graph.
double mean_degree(const GsbmGraph& graph);

/// Line-oriented text format:
///   gsbm v1 d=<d> n=<n> lambda=<lambda> r=<r> seed=<seed> count=<V>
///   p <profile literal>
///   v <id> <x1> ... <xd> <label>     (one per vertex, ids ascending)
///   e <lo> <hi>                      (one per edge, sorted)
/// Reals are written in shortest round-trip form.
void write_graph(std::ostream& out, const GsbmGraph& graph);
GsbmGraph read_graph(std::istream& in);

}  // namespace gsbm
