#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsbm/geometry.hpp"
#include "gsbm/sampler.hpp"

namespace gsbm {

using BlockId = std::uint32_t;

/// Grid parameters that make a block too wide to see across itself.
class PartitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Regular tiling of the torus into blocks_per_axis^d cubes.
///
/// Block ids are mixed-radix over the per-axis block coordinates with axis 0
/// least significant. Members of each block are kept in ascending vertex id.
struct BlockGrid {
  TorusBox box;
  int blocks_per_axis = 1;
  double block_side = 0.0;
  double nominal_volume = 0.0;
  double delta_threshold = 0.0;
  std::vector<BlockId> vertex_block;
  std::vector<std::uint32_t> occupancy;
  std::vector<std::size_t> member_begin;
  std::vector<VertexId> member_ids;

  std::size_t block_count() const { return occupancy.size(); }
  std::span<const VertexId> members(BlockId b) const {
    return {member_ids.data() + member_begin[b], member_ids.data() + member_begin[b + 1]};
  }
  bool occupied(BlockId b) const { return occupancy[b] >= delta_threshold; }
  std::array<int, kMaxDim> coords(BlockId b) const;
  BlockId block_at(const std::array<int, kMaxDim>& coords) const;
  AxisBox block_box(BlockId b) const;
};

/// Blocks of nominal volume r^d chi log n, stretched so that
/// blocks_per_axis = floor(side / (r^d chi log n)^{1/d}) of them tile each axis.
/// Throws PartitionError when a block's diameter sqrt(d) * block_side exceeds
/// `radius`, since vertices sharing a block must all see each other.
BlockGrid build_block_grid(const TorusBox& box, std::span<const double> positions, double r, double radius,
                           double chi, double delta);
BlockGrid build_block_grid(const GsbmGraph& graph, double chi, double delta);

/// Ids of blocks holding at least delta log n vertices, ascending.
std::vector<BlockId> occupied_blocks(const BlockGrid& grid);

inline constexpr BlockId kNoBlock = std::numeric_limits<BlockId>::max();

/// Graph on occupied blocks; two are adjacent when every pair of points
/// across them is within the visibility radius.
struct VisibilityGraph {
  std::vector<BlockId> nodes;          // occupied blocks, ascending
  std::vector<std::size_t> offsets;    // CSR over node positions
  std::vector<BlockId> adjacency;      // neighbor block ids, ascending per node
  bool connected = false;
  /// Spanning tree, filled only when connected: parent[i] is the parent
  /// block of nodes[i] (kNoBlock for the root), and bfs_order lists blocks
  /// from the root outward.
  std::vector<BlockId> parent;
  std::vector<BlockId> bfs_order;

  std::size_t node_index(BlockId b) const;  // throws if b is not a node
  std::span<const BlockId> neighbors(std::size_t node) const {
    return {adjacency.data() + offsets[node], adjacency.data() + offsets[node + 1]};
  }
  BlockId parent_of(BlockId b) const { return parent[node_index(b)]; }
};

/// Candidate neighbors are the blocks within ceil(radius / block_side) + 1
/// grid steps per axis; each candidate is kept when its sup distance is at
/// most `radius`. The tree is a BFS from the smallest occupied id, visiting
/// neighbors in ascending id.
VisibilityGraph build_visibility_graph(const BlockGrid& grid, double radius);
VisibilityGraph build_visibility_graph(const BlockGrid& grid, const GsbmGraph& graph);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the conditions on (chi0, chi, delta) under which the block
/// visibility graph is connected with high probability.
ValidationReport validate_parameters(int d, double lambda, double r, double chi, double delta, double chi0,
                                     double delta_factor);

/// Union-find with path halving and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t count);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t components() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t components_;
};

/// Whether the graph joining every pair at distance <= radius is connected.
/// The empty point set counts as connected.
bool vertex_visibility_connected(const CellIndex& index, double radius);
bool vertex_visibility_connected(const GsbmGraph& graph);

}  // namespace gsbm
