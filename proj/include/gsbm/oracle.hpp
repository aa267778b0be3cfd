#pragma once

#include <span>
#include <vector>

#include "gsbm/sampler.hpp"

namespace gsbm {

/// sign(tau(v, sigma*)), ties to +1.
Label genie_label(const GsbmGraph& graph, VertexId v);

struct FlipBadReport {
  std::size_t count = 0;
  std::vector<VertexId> vertex_ids;
  std::vector<double> tau_values;  // tau(v, sigma*) for every vertex
};

/// Vertices with sigma*(v) tau(v, sigma*) <= 0: flipping them alone does not
/// lower the likelihood.
FlipBadReport flip_bad_census(const GsbmGraph& graph);

/// Every pair within the visibility radius with its two possible
/// log-likelihood contributions, in ascending (lo, hi) order.
struct PairTable {
  struct Pair {
    VertexId lo, hi;
    double log_same;  // log f_in or log(1 - f_in), per the observed edge
    double log_diff;  // log f_out or log(1 - f_out)
  };
  std::vector<Pair> pairs;
};

PairTable build_pair_table(const GsbmGraph& graph);

/// Log-probability of the observed edges given positions and labels (+1/-1),
/// summed over the table in its fixed order.
double likelihood(const PairTable& table, std::span<const Label> labels);
double likelihood(const GsbmGraph& graph, std::span<const Label> labels);

struct MleResult {
  std::vector<Label> labels;
  double log_likelihood = 0.0;
};

inline constexpr std::size_t kMaxMleVertices = 20;

/// Exhaustive maximum-likelihood labeling with vertex 0 pinned to +1. Among
/// equal maxima the lexicographically smallest labeling wins, with -1 < +1.
MleResult brute_force_mle(const GsbmGraph& graph);

}  // namespace gsbm
