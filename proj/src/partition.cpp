#include "gsbm/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace gsbm {

std::array<int, kMaxDim> BlockGrid::coords(BlockId b) const {
  std::array<int, kMaxDim> c{};
  for (int k = 0; k < box.d; ++k) {
    c[k] = static_cast<int>(b % blocks_per_axis);
    b /= blocks_per_axis;
  }
  return c;
}

BlockId BlockGrid::block_at(const std::array<int, kMaxDim>& c) const {
  std::uint64_t id = 0;
  for (int k = box.d - 1; k >= 0; --k) id = id * blocks_per_axis + c[k];
  return static_cast<BlockId>(id);
}

AxisBox BlockGrid::block_box(BlockId b) const {
  const auto c = coords(b);
  AxisBox out;
  for (int k = 0; k < box.d; ++k) {
    out.lo[k] = c[k] * block_side;
    out.hi[k] = c[k] + 1 == blocks_per_axis ? box.side : (c[k] + 1) * block_side;
  }
  return out;
}

BlockGrid build_block_grid(const TorusBox& box, std::span<const double> positions, double r, double radius,
                           double chi, double delta) {
  if (!(chi > 0.0)) throw std::invalid_argument("chi must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  const int d = box.d;
  const double log_n = std::log(box.n);
  if (!(log_n > 0.0)) throw std::invalid_argument("invalid scale: n must exceed 1");

  BlockGrid grid;
  grid.box = box;
  grid.nominal_volume = std::pow(r, d) * chi * log_n;
  grid.delta_threshold = delta * log_n;
  const double nominal_side = std::pow(grid.nominal_volume, 1.0 / d);
  const double per_axis = std::max(1.0, std::floor(box.side / nominal_side));
  const double total = std::pow(per_axis, d);
  if (total > 4.0e9) throw PartitionError("block grid too fine: more than 4e9 blocks");
  grid.blocks_per_axis = static_cast<int>(per_axis);
  grid.block_side = box.side / grid.blocks_per_axis;
  if (std::sqrt(static_cast<double>(d)) * grid.block_side > radius) {
    throw PartitionError("block diameter " + std::to_string(std::sqrt(static_cast<double>(d)) * grid.block_side) +
                         " exceeds the visibility radius " + std::to_string(radius) + "; lower chi");
  }

  const std::size_t count = positions.size() / d;
  const std::size_t blocks = static_cast<std::size_t>(total);
  grid.vertex_block.resize(count);
  grid.occupancy.assign(blocks, 0);
  for (std::size_t v = 0; v < count; ++v) {
    std::array<int, kMaxDim> c{};
    for (int k = 0; k < d; ++k) {
      c[k] = std::min(grid.blocks_per_axis - 1, static_cast<int>(std::floor(positions[v * d + k] / grid.block_side)));
    }
    const BlockId b = grid.block_at(c);
    grid.vertex_block[v] = b;
    ++grid.occupancy[b];
  }
  grid.member_begin.assign(blocks + 1, 0);
  for (std::size_t b = 0; b < blocks; ++b) grid.member_begin[b + 1] = grid.member_begin[b] + grid.occupancy[b];
  grid.member_ids.resize(count);
  std::vector<std::size_t> fill(grid.member_begin.begin(), grid.member_begin.end() - 1);
  for (std::size_t v = 0; v < count; ++v) grid.member_ids[fill[grid.vertex_block[v]]++] = static_cast<VertexId>(v);
  return grid;
}

BlockGrid build_block_grid(const GsbmGraph& graph, double chi, double delta) {
  return build_block_grid(graph.box(), graph.positions(), graph.profile().r(), graph.visibility_radius(), chi, delta);
}

std::vector<BlockId> occupied_blocks(const BlockGrid& grid) {
  std::vector<BlockId> out;
  for (std::size_t b = 0; b < grid.block_count(); ++b) {
    if (grid.occupied(static_cast<BlockId>(b))) out.push_back(static_cast<BlockId>(b));
  }
  return out;
}

std::size_t VisibilityGraph::node_index(BlockId b) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), b);
  if (it == nodes.end() || *it != b) throw std::out_of_range("block is not an occupied node");
  return static_cast<std::size_t>(it - nodes.begin());
}

VisibilityGraph build_visibility_graph(const BlockGrid& grid, double radius) {
  VisibilityGraph h;
  h.nodes = occupied_blocks(grid);
  const int d = grid.box.d;
  const int k = grid.blocks_per_axis;

  // Per-axis offsets worth checking, as distinct residues mod k.
  const int reach = static_cast<int>(std::ceil(radius / grid.block_side)) + 1;
  std::vector<int> steps;
  if (2 * reach + 1 >= k) {
    steps.resize(k);
    std::iota(steps.begin(), steps.end(), 0);
  } else {
    for (int s = -reach; s <= reach; ++s) steps.push_back(s);
  }

  h.offsets.assign(h.nodes.size() + 1, 0);
  std::vector<BlockId> scratch;
  for (std::size_t i = 0; i < h.nodes.size(); ++i) {
    const BlockId b = h.nodes[i];
    const auto base = grid.coords(b);
    const AxisBox box_b = grid.block_box(b);
    scratch.clear();
    std::array<std::size_t, kMaxDim> pick{};
    while (true) {
      std::array<int, kMaxDim> c{};
      for (int a = 0; a < d; ++a) c[a] = ((base[a] + steps[pick[a]]) % k + k) % k;
      const BlockId other = grid.block_at(c);
      if (other != b && grid.occupied(other) &&
          block_sup_distance(box_b, grid.block_box(other), grid.box) <= radius) {
        scratch.push_back(other);
      }
      int a = 0;
      while (a < d && ++pick[a] == steps.size()) pick[a++] = 0;
      if (a == d) break;
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    h.adjacency.insert(h.adjacency.end(), scratch.begin(), scratch.end());
    h.offsets[i + 1] = h.adjacency.size();
  }

  if (h.nodes.empty()) return h;
  std::vector<BlockId> parent(h.nodes.size(), kNoBlock);
  std::vector<char> seen(h.nodes.size(), 0);
  std::vector<BlockId> order;
  order.reserve(h.nodes.size());
  std::deque<std::size_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    order.push_back(h.nodes[i]);
    for (BlockId nb : h.neighbors(i)) {
      const std::size_t j = h.node_index(nb);
      if (seen[j]) continue;
      seen[j] = 1;
      parent[j] = h.nodes[i];
      queue.push_back(j);
    }
  }
  h.connected = order.size() == h.nodes.size();
  if (h.connected) {
    h.parent = std::move(parent);
    h.bfs_order = std::move(order);
  }
  return h;
}

VisibilityGraph build_visibility_graph(const BlockGrid& grid, const GsbmGraph& graph) {
  return build_visibility_graph(grid, graph.visibility_radius());
}

ValidationReport validate_parameters(int d, double lambda, double r, double chi, double delta, double chi0,
                                     double delta_factor) {
  ValidationReport report;
  auto fail = [&](std::string message) { report.violations.push_back(std::move(message)); };
  if (d < 1) fail("d must be at least 1");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (!(r > 0.0)) fail("r must be positive");
  if (!(chi > 0.0)) fail("chi must be positive");
  if (!(chi0 > 0.0)) fail("chi0 must be positive");
  if (!(delta > 0.0)) fail("delta must be positive");
  if (!(delta_factor > 0.0)) fail("delta_factor must be positive");
  if (!report.ok()) return report;

  if (d == 1) {
    const double lr = lambda * r;
    if (!(lr > 1.0)) fail("lambda * r = " + std::to_string(lr) + " must exceed 1");
    const double bound = (1.0 - 1.0 / lr) / 2.0;
    if (!(chi0 < bound)) {
      fail("chi0 = " + std::to_string(chi0) + " must be below (1 - 1/(lambda r))/2 = " + std::to_string(bound));
    }
  } else {
    const double shrink = 1.0 - 1.5 * std::sqrt(static_cast<double>(d)) * std::pow(chi0, 1.0 / d);
    if (!(shrink > 0.0)) {
      fail("1 - (3 sqrt(d)/2) chi0^(1/d) = " + std::to_string(shrink) + " must be positive");
    } else {
      const double margin = lambda * std::pow(r, d) * (unit_ball_volume(d) * std::pow(shrink, d) - chi0);
      if (!(margin > 1.0)) {
        fail("lambda r^d (nu_d (1 - (3 sqrt(d)/2) chi0^(1/d))^d - chi0) = " + std::to_string(margin) +
             " must exceed 1");
      }
    }
  }
  if (!(chi0 / 2.0 < chi && chi < chi0)) {
    fail("chi = " + std::to_string(chi) + " must lie strictly between chi0/2 and chi0 = " + std::to_string(chi0));
  }
  if (!(delta < delta_factor * chi)) {
    fail("delta = " + std::to_string(delta) + " must be below delta_factor * chi = " +
         std::to_string(delta_factor * chi));
  }
  return report;
}

DisjointSet::DisjointSet(std::size_t count) : parent_(count), size_(count, 1), components_(count) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSet::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --components_;
  return true;
}

bool vertex_visibility_connected(const CellIndex& index, double radius) {
  const std::size_t count = index.size();
  if (count <= 1) return true;
  DisjointSet sets(count);
  for (VertexId v = 0; v < count && sets.components() > 1; ++v) {
    index.for_each_within(v, radius, Boundary::closed, [&](VertexId u, double) {
      if (u > v) sets.unite(u, v);
    });
  }
  return sets.components() == 1;
}

bool vertex_visibility_connected(const GsbmGraph& graph) {
  return vertex_visibility_connected(graph.index(), graph.visibility_radius());
}

}  // namespace gsbm
