#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gsbm/kernels.hpp"

namespace gsbm {

using VertexId = std::uint32_t;

inline constexpr int kMaxDim = 8;

/// The torus [0, side)^d of volume n = side^d. Coordinates are kept shifted
/// to [0, side) rather than centred; the metric cannot tell the difference.
struct TorusBox {
  int d = 1;
  double side = 1.0;
  double n = 1.0;

  /// Box of volume n in d dimensions.
  static TorusBox from_volume(int d, double n);
};

/// Wrap-around Euclidean distance between two points of `box`.
double torus_distance(std::span<const double> u, std::span<const double> v, const TorusBox& box);

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// Axis-aligned box [lo_k, hi_k] per axis, in torus coordinates.
struct AxisBox {
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
};

/// sup over x in a, y in b of torus_distance(x, y).
double block_sup_distance(const AxisBox& a, const AxisBox& b, const TorusBox& box);

/// Largest circular distance on a circle of circumference `length` among the
/// differences in [lo, hi].
double circular_sup(double lo, double hi, double length);

enum class Boundary { open, closed };

/// Uniform cell list over the torus for fixed-radius queries.
///
/// Cells have side >= the build radius, so a query inspects the 3^d cells
/// around the query point (fewer distinct ones when an axis has at most two
/// cells). Points are stored cell by cell, axis-major, so each cell is one
/// contiguous run for the distance kernel. Immutable after construction.
class CellIndex {
 public:
  /// `positions` is row-major, d coordinates per vertex.
  CellIndex(const TorusBox& box, std::span<const double> positions, double radius);

  std::size_t size() const { return slot_of_.size(); }
  const TorusBox& box() const { return box_; }
  double radius() const { return radius_; }
  int cells_per_axis() const { return cells_per_axis_; }
  double cell_side() const { return cell_side_; }
  std::size_t cell_count() const { return cell_begin_.size() - 1; }
  std::span<const VertexId> cell_members(std::size_t cell) const {
    return {order_.data() + cell_begin_[cell], order_.data() + cell_begin_[cell + 1]};
  }

  /// Calls fn(u, distance) for every u != v with distance < radius (open) or
  /// <= radius (closed). Visit order is fixed by the index.
  template <class Fn>
  void for_each_within(VertexId v, double radius, Boundary boundary, Fn&& fn) const;

  /// Same as for_each_within but collects ids, sorted ascending.
  std::vector<VertexId> neighbors_within(VertexId v, double radius, Boundary boundary = Boundary::open) const;

  /// Calls fn(u, distance) for every stored point within radius of `point`.
  template <class Fn>
  void for_each_near(std::span<const double> point, double radius, Boundary boundary, Fn&& fn) const;

  std::span<const double> point(VertexId v, std::array<double, kMaxDim>& scratch) const;

 private:
  struct AxisCells {
    int cell[3];
    int count;
  };
  /// Distinct cells along one axis that can hold points within the build
  /// radius of coordinate x.
  AxisCells candidate_cells(double x) const;
  int axis_cell(double x) const;
  void check_radius(double radius) const;

  TorusBox box_;
  double radius_;
  int cells_per_axis_ = 1;
  double cell_side_ = 0.0;
  std::vector<std::size_t> cell_begin_;
  std::vector<VertexId> order_;
  std::vector<std::uint32_t> slot_of_;
  std::array<std::vector<double>, kMaxDim> axes_;
  kernels::TorusDistancesFn distances_;
};

template <class Fn>
void CellIndex::for_each_near(std::span<const double> point, double radius, Boundary boundary, Fn&& fn) const {
  check_radius(radius);
  const int d = box_.d;
  AxisCells axis_cells[kMaxDim];
  for (int k = 0; k < d; ++k) axis_cells[k] = candidate_cells(point[k]);

  constexpr std::size_t kChunk = 64;
  double dist[kChunk];
  int pick[kMaxDim] = {};
  while (true) {
    std::size_t cell = 0;
    for (int k = d - 1; k >= 0; --k) cell = cell * cells_per_axis_ + axis_cells[k].cell[pick[k]];
    const std::size_t end = cell_begin_[cell + 1];
    for (std::size_t begin = cell_begin_[cell]; begin < end; begin += kChunk) {
      const std::size_t count = end - begin < kChunk ? end - begin : kChunk;
      const double* axes[kMaxDim];
      for (int k = 0; k < d; ++k) axes[k] = axes_[k].data() + begin;
      distances_(axes, d, count, point.data(), box_.side, dist);
      for (std::size_t i = 0; i < count; ++i) {
        const bool inside = boundary == Boundary::open ? dist[i] < radius : dist[i] <= radius;
        if (inside) fn(order_[begin + i], dist[i]);
      }
    }
    int k = 0;
    while (k < d && ++pick[k] == axis_cells[k].count) pick[k++] = 0;
    if (k == d) break;
  }
}

template <class Fn>
void CellIndex::for_each_within(VertexId v, double radius, Boundary boundary, Fn&& fn) const {
  if (v >= slot_of_.size()) throw std::out_of_range("unknown vertex id");
  std::array<double, kMaxDim> q;
  point(v, q);
  for_each_near(std::span<const double>(q.data(), box_.d), radius, boundary, [&](VertexId u, double dist) {
    if (u != v) fn(u, dist);
  });
}

}  // namespace gsbm
