#include "gsbm/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "gsbm/partition.hpp"

namespace gsbm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::string_view status_name(RecoveryStatus status) {
  return status == RecoveryStatus::ok ? "ok" : "fail_disconnected";
}

double pairwise_statistic(const GsbmGraph& graph, std::span<const VertexId> block, VertexId u0, VertexId v) {
  const ScaledProfile f = graph.scaled();
  double x = 0.0;
  for (VertexId u : block) {
    if (u == u0 || u == v) continue;
    const EdgeProbabilities a = f.eval(graph.distance(u, u0));
    const EdgeProbabilities b = f.eval(graph.distance(u, v));
    const double alpha = sign_of(a.diff() * b.diff());
    const double observed = graph.has_edge(u0, u) && graph.has_edge(v, u) ? 1.0 : 0.0;
    const double expected = 0.25 * (a.in + a.out) * (b.in + b.out);
    x += alpha * (observed - expected);
  }
  return x;
}

std::vector<Label> pairwise_classify(const GsbmGraph& graph, std::span<const VertexId> block) {
  std::vector<Label> out(block.size());
  if (block.empty()) return out;
  const VertexId u0 = *std::min_element(block.begin(), block.end());
  for (std::size_t i = 0; i < block.size(); ++i) {
    out[i] = block[i] == u0 ? Label{1} : sign_label(pairwise_statistic(graph, block, u0, block[i]));
  }
  return out;
}

double propagate_statistic(const GsbmGraph& graph, std::span<const VertexId> parent, std::span<const Label> labels,
                           VertexId v, double eps) {
  const ScaledProfile f = graph.scaled();
  std::size_t plus = 0;
  std::size_t minus = 0;
  for (VertexId u : parent) {
    if (labels[u] == 0 || !f.distinguishes(graph.distance(u, v), eps)) continue;
    (labels[u] > 0 ? plus : minus) += 1;
  }
  const Label group = plus >= minus ? Label{1} : Label{-1};
  double y = 0.0;
  for (VertexId u : parent) {
    if (labels[u] != group) continue;
    const double dist = graph.distance(u, v);
    if (!f.distinguishes(dist, eps)) continue;
    const EdgeProbabilities p = f.eval(dist);
    const double beta = group > 0 ? sign_of(p.in - p.out) : sign_of(p.out - p.in);
    const double observed = graph.has_edge(v, u) ? 1.0 : 0.0;
    y += beta * (observed - 0.5 * (p.in + p.out));
  }
  return y;
}

std::vector<Label> propagate(const GsbmGraph& graph, std::span<const VertexId> parent, std::span<const Label> labels,
                             std::span<const VertexId> child, double eps) {
  std::vector<Label> out(child.size());
  for (std::size_t i = 0; i < child.size(); ++i) {
    out[i] = sign_label(propagate_statistic(graph, parent, labels, child[i], eps));
  }
  return out;
}

namespace {

// tau with the adjacency test supplied by the caller.
template <typename IsEdge>
double tau_sum(const GsbmGraph& graph, const ScaledProfile& f, std::span<const Label> sigma, VertexId v,
               IsEdge&& is_edge) {
  double total = 0.0;
  double magnitude = 0.0;
  graph.index().for_each_within(v, graph.visibility_radius(), Boundary::closed, [&](VertexId u, double dist) {
    const Label s = sigma[u];
    if (s == 0) return;
    const LogRatios logs = f.log_ratios(dist);
    const double term = is_edge(u) ? logs.edge : logs.no_edge;
    total += s > 0 ? term : -term;
    magnitude += std::abs(term);
  });
  // Symmetric profiles make exact cancellation common; do not let the
  // summation order pick the sign.
  return std::abs(total) <= kTauTieTolerance * magnitude ? 0.0 : total;
}

}  // namespace

double tau(const GsbmGraph& graph, std::span<const Label> sigma, VertexId v) {
  const auto adjacent = graph.neighbors(v);
  return tau_sum(graph, graph.scaled(), sigma, v,
                 [&](VertexId u) { return std::binary_search(adjacent.begin(), adjacent.end(), u); });
}

Label refine(const GsbmGraph& graph, std::span<const Label> sigma, VertexId v) {
  return sign_label(tau(graph, sigma, v));
}

RecoveryOutcome run_exact_recovery(const GsbmGraph& graph, double chi, double delta, std::optional<double> eps_override) {
  RecoveryOutcome outcome;
  const std::size_t count = graph.size();
  outcome.eps = eps_override ? *eps_override : graph.profile().default_epsilon();
  if (!(outcome.eps > 0.0)) throw std::invalid_argument("eps must be positive");

  auto t = Clock::now();
  const BlockGrid grid = build_block_grid(graph, chi, delta);
  outcome.runtime_breakdown.emplace_back("grid", elapsed_ms(t));

  t = Clock::now();
  const VisibilityGraph h = build_visibility_graph(grid, graph);
  outcome.occupied_blocks = h.nodes.size();
  outcome.runtime_breakdown.emplace_back("visibility", elapsed_ms(t));

  t = Clock::now();
  std::vector<Label> phase1(count, 0);
  if (h.connected) {
    const BlockId root = h.bfs_order.front();
    const auto root_members = grid.members(root);
    const auto root_labels = pairwise_classify(graph, root_members);
    for (std::size_t i = 0; i < root_members.size(); ++i) phase1[root_members[i]] = root_labels[i];
    for (std::size_t i = 1; i < h.bfs_order.size(); ++i) {
      const BlockId b = h.bfs_order[i];
      const auto members = grid.members(b);
      const auto labels = propagate(graph, grid.members(h.parent_of(b)), phase1, members, outcome.eps);
      for (std::size_t j = 0; j < members.size(); ++j) phase1[members[j]] = labels[j];
    }
  } else {
    outcome.status = RecoveryStatus::fail_disconnected;
  }
  outcome.runtime_breakdown.emplace_back("phase1", elapsed_ms(t));

  t = Clock::now();
  std::vector<Label> phase2(count);
  {
    // stamp[u] == v + 1 marks u as adjacent to v. Cells are visited in
    // index order so consecutive vertices share most of their neighborhood.
    const ScaledProfile f = graph.scaled();
    const CellIndex& index = graph.index();
    std::vector<VertexId> stamp(count, 0);
    for (std::size_t c = 0; c < index.cell_count(); ++c) {
      for (VertexId v : index.cell_members(c)) {
        for (VertexId u : graph.neighbors(v)) stamp[u] = v + 1;
        phase2[v] = sign_label(tau_sum(graph, f, phase1, v, [&](VertexId u) { return stamp[u] == v + 1; }));
      }
    }
  }
  outcome.runtime_breakdown.emplace_back("phase2", elapsed_ms(t));

  std::size_t wrong_same = 0;
  std::size_t wrong_flipped = 0;
  for (VertexId v = 0; v < count; ++v) {
    if (phase1[v] == 0) continue;
    wrong_same += phase1[v] != graph.label(v);
    wrong_flipped += phase1[v] == graph.label(v);
  }
  outcome.mistakes_phase1 = std::min(wrong_same, wrong_flipped);
  const Label orientation = wrong_same <= wrong_flipped ? Label{1} : Label{-1};
  for (BlockId b : h.nodes) {
    std::size_t wrong = 0;
    for (VertexId v : grid.members(b)) wrong += phase1[v] != 0 && phase1[v] != orientation * graph.label(v);
    outcome.max_block_mistakes_phase1 = std::max(outcome.max_block_mistakes_phase1, wrong);
  }

  outcome.phase1 = Labeling{std::move(phase1), Phase::phase1};
  outcome.labeling = Labeling{std::move(phase2), Phase::phase2};
  return outcome;
}

double agreement(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw std::invalid_argument("labelings differ in length");
  if (a.empty()) return 1.0;
  std::size_t same = 0;
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0 || b[i] == 0) continue;
    same += a[i] == b[i];
    flipped += a[i] == -b[i];
  }
  return static_cast<double>(std::max(same, flipped)) / static_cast<double>(a.size());
}

}  // namespace gsbm
