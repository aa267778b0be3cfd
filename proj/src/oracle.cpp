#include "gsbm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsbm/recovery.hpp"

namespace gsbm {

Label genie_label(const GsbmGraph& graph, VertexId v) { return refine(graph, graph.labels(), v); }

FlipBadReport flip_bad_census(const GsbmGraph& graph) {
  FlipBadReport report;
  report.tau_values.resize(graph.size());
  for (VertexId v = 0; v < graph.size(); ++v) {
    const double t = tau(graph, graph.labels(), v);
    report.tau_values[v] = t;
    if (graph.label(v) * t <= 0.0) report.vertex_ids.push_back(v);
  }
  report.count = report.vertex_ids.size();
  return report;
}

PairTable build_pair_table(const GsbmGraph& graph) {
  PairTable table;
  const ScaledProfile f = graph.scaled();
  std::vector<VertexId> near;
  for (VertexId v = 0; v < graph.size(); ++v) {
    near.clear();
    graph.index().for_each_within(v, graph.visibility_radius(), Boundary::closed, [&](VertexId u, double) {
      if (u > v) near.push_back(u);
    });
    std::sort(near.begin(), near.end());
    for (VertexId u : near) {
      const EdgeProbabilities p = f.eval(graph.distance(v, u));
      const bool edge = graph.has_edge(v, u);
      table.pairs.push_back({v, u, std::log(edge ? p.in : 1.0 - p.in), std::log(edge ? p.out : 1.0 - p.out)});
    }
  }
  return table;
}

double likelihood(const PairTable& table, std::span<const Label> labels) {
  double total = 0.0;
  for (const auto& pair : table.pairs) total += labels[pair.lo] == labels[pair.hi] ? pair.log_same : pair.log_diff;
  return total;
}

double likelihood(const GsbmGraph& graph, std::span<const Label> labels) {
  if (labels.size() != graph.size()) throw std::invalid_argument("labeling length differs from the vertex count");
  return likelihood(build_pair_table(graph), labels);
}

MleResult brute_force_mle(const GsbmGraph& graph) {
  const std::size_t count = graph.size();
  if (count > kMaxMleVertices) {
    throw std::invalid_argument("brute-force MLE supports at most " + std::to_string(kMaxMleVertices) +
                                " vertices, got " + std::to_string(count));
  }
  MleResult best;
  if (count == 0) return best;
  const PairTable table = build_pair_table(graph);
  std::vector<Label> labels(count);
  bool have = false;
  // Bit i of `mask` set means vertex i + 1 is +1. Counting masks upward with
  // vertex 1 as the most significant bit walks labelings in lexicographic
  // order, so a strict improvement test keeps the smallest maximizer.
  const std::size_t free_bits = count - 1;
  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    labels[0] = 1;
    for (std::size_t i = 1; i < count; ++i) {
      labels[i] = (mask >> (free_bits - i)) & 1 ? Label{1} : Label{-1};
    }
    const double value = likelihood(table, labels);
    if (!have || value > best.log_likelihood) {
      best.labels = labels;
      best.log_likelihood = value;
      have = true;
    }
  }
  return best;
}

}  // namespace gsbm
