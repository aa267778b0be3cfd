#include "gsbm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gsbm {

TorusBox TorusBox::from_volume(int d, double n) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("volume must be positive and finite");
  return TorusBox{d, d == 1 ? n : std::pow(n, 1.0 / d), n};
}

double torus_distance(std::span<const double> u, std::span<const double> v, const TorusBox& box) {
  double acc = 0.0;
  for (int k = 0; k < box.d; ++k) {
    const double sep = std::abs(u[k] - v[k]);
    const double wrapped = box.side - sep;
    const double m = wrapped < sep ? wrapped : sep;
    acc = acc + m * m;
  }
  return std::sqrt(acc);
}

double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double circular_sup(double lo, double hi, double length) {
  const double half = length / 2.0;
  if (hi - lo >= length) return half;
  // First point >= lo congruent to length/2.
  const double peak = half + length * std::ceil((lo - half) / length);
  if (peak <= hi) return half;
  auto circ = [&](double x) {
    const double m = std::fmod(std::abs(x), length);
    return std::min(m, length - m);
  };
  return std::max(circ(lo), circ(hi));
}

double block_sup_distance(const AxisBox& a, const AxisBox& b, const TorusBox& box) {
  double acc = 0.0;
  for (int k = 0; k < box.d; ++k) {
    // y - x ranges over [b.lo - a.hi, b.hi - a.lo].
    const double m = circular_sup(b.lo[k] - a.hi[k], b.hi[k] - a.lo[k], box.side);
    acc += m * m;
  }
  return std::sqrt(acc);
}

CellIndex::CellIndex(const TorusBox& box, std::span<const double> positions, double radius)
    : box_(box), radius_(radius), distances_(kernels::torus_distances()) {
  if (!(radius > 0.0)) throw std::invalid_argument("cell index radius must be positive");
  const int d = box.d;
  if (positions.size() % static_cast<std::size_t>(d) != 0) {
    throw std::invalid_argument("position array length is not a multiple of d");
  }
  const std::size_t count = positions.size() / d;

  // Small margin keeps every cell at least `radius` wide after rounding.
  const double per_axis = std::floor(box.side / (radius * (1.0 + 1e-9)));
  cells_per_axis_ = static_cast<int>(std::clamp(per_axis, 1.0, 1e6));
  double total = std::pow(static_cast<double>(cells_per_axis_), d);
  while (total > 4.0 * static_cast<double>(count) + 64.0 && cells_per_axis_ > 1) {
    // Far more cells than points only wastes memory; coarser cells stay valid.
    cells_per_axis_ = std::max(1, cells_per_axis_ / 2);
    total = std::pow(static_cast<double>(cells_per_axis_), d);
  }
  cell_side_ = box.side / cells_per_axis_;

  const std::size_t cells = static_cast<std::size_t>(total);
  std::vector<std::size_t> cell_of_vertex(count);
  cell_begin_.assign(cells + 1, 0);
  for (std::size_t v = 0; v < count; ++v) {
    std::size_t cell = 0;
    for (int k = d - 1; k >= 0; --k) cell = cell * cells_per_axis_ + axis_cell(positions[v * d + k]);
    cell_of_vertex[v] = cell;
    ++cell_begin_[cell + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_begin_[c + 1] += cell_begin_[c];

  order_.resize(count);
  slot_of_.resize(count);
  for (int k = 0; k < d; ++k) axes_[k].resize(count);
  std::vector<std::size_t> fill(cell_begin_.begin(), cell_begin_.end() - 1);
  for (std::size_t v = 0; v < count; ++v) {
    const std::size_t slot = fill[cell_of_vertex[v]]++;
    order_[slot] = static_cast<VertexId>(v);
    slot_of_[v] = static_cast<std::uint32_t>(slot);
    for (int k = 0; k < d; ++k) axes_[k][slot] = positions[v * d + k];
  }
}

int CellIndex::axis_cell(double x) const {
  const int c = static_cast<int>(std::floor(x / cell_side_));
  return std::clamp(c, 0, cells_per_axis_ - 1);
}

CellIndex::AxisCells CellIndex::candidate_cells(double x) const {
  AxisCells out{};
  const int k = cells_per_axis_;
  if (k <= 3) {
    out.count = k;
    for (int i = 0; i < k; ++i) out.cell[i] = i;
    return out;
  }
  const int c = axis_cell(x);
  out.count = 3;
  out.cell[0] = (c + k - 1) % k;
  out.cell[1] = c;
  out.cell[2] = (c + 1) % k;
  return out;
}

void CellIndex::check_radius(double radius) const {
  if (radius > radius_) throw std::invalid_argument("query radius exceeds the index radius");
}

std::span<const double> CellIndex::point(VertexId v, std::array<double, kMaxDim>& scratch) const {
  const std::size_t slot = slot_of_.at(v);
  for (int k = 0; k < box_.d; ++k) scratch[k] = axes_[k][slot];
  return {scratch.data(), static_cast<std::size_t>(box_.d)};
}

std::vector<VertexId> CellIndex::neighbors_within(VertexId v, double radius, Boundary boundary) const {
  std::vector<VertexId> out;
  for_each_within(v, radius, boundary, [&](VertexId u, double) { out.push_back(u); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gsbm
