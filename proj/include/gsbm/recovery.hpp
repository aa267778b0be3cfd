#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gsbm/sampler.hpp"

namespace gsbm {

/// sign with sign(0) = +1.
inline Label sign_label(double x) { return x >= 0.0 ? Label{1} : Label{-1}; }

/// Mathematical sign: -1, 0 or +1.
inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

enum class Phase { phase1, phase2 };

struct Labeling {
  std::vector<Label> values;  // entries in {-1, 0, +1}
  Phase phase = Phase::phase1;
};

enum class RecoveryStatus { ok, fail_disconnected };

std::string_view status_name(RecoveryStatus status);

struct RecoveryOutcome {
  Labeling phase1;
  Labeling labeling;  // phase 2, no zeros
  RecoveryStatus status = RecoveryStatus::ok;
  /// Phase-1 disagreements with the true labels over labeled vertices, under
  /// the better of the two global signs.
  std::size_t mistakes_phase1 = 0;
  /// Largest per-block share of mistakes_phase1 over occupied blocks.
  std::size_t max_block_mistakes_phase1 = 0;
  double eps = 0.0;
  std::size_t occupied_blocks = 0;
  std::vector<std::pair<std::string, double>> runtime_breakdown;  // stage, milliseconds
};

/// Common-neighbor statistic for v against u0 inside one block:
/// sum over u in block minus {u0, v} of
///   alpha_u (1{u~u0, u~v} - (f_in + f_out)(d(u,u0)) (f_in + f_out)(d(u,v)) / 4)
/// with alpha_u = sign(f_diff(d(u,u0)) f_diff(d(u,v))), all at graph scale.
double pairwise_statistic(const GsbmGraph& graph, std::span<const VertexId> block, VertexId u0, VertexId v);

/// Labels one block: its smallest id gets +1, every other v gets
/// sign(pairwise_statistic). Output is aligned with `block`.
std::vector<Label> pairwise_classify(const GsbmGraph& graph, std::span<const VertexId> block);

/// Edge statistic for v against a labeled parent block. Parents that
/// eps-distinguish v are counted by label; the larger group (+1 on ties)
/// contributes beta_u (1{u~v} - (f_in + f_out)(d(u,v)) / 2), with
/// beta_u = sign(f_in - f_out) for the +1 group and sign(f_out - f_in) for
/// the -1 group.
double propagate_statistic(const GsbmGraph& graph, std::span<const VertexId> parent, std::span<const Label> labels,
                           VertexId v, double eps);

/// sign(propagate_statistic) for each child, aligned with `child`. `labels`
/// is indexed by vertex id.
std::vector<Label> propagate(const GsbmGraph& graph, std::span<const VertexId> parent, std::span<const Label> labels,
                             std::span<const VertexId> child, double eps);

/// Relative size below which a tau sum counts as an exact zero.
inline constexpr double kTauTieTolerance = 1e-12;

/// Log-likelihood ratio of v being +1 versus -1 given the labels of the
/// other vertices within the visibility radius. Unlabeled (0) vertices are
/// skipped. A sum within kTauTieTolerance of the summed magnitudes is
/// returned as 0.
double tau(const GsbmGraph& graph, std::span<const Label> sigma, VertexId v);

Label refine(const GsbmGraph& graph, std::span<const Label> sigma, VertexId v);

/// Block partition, phase-1 labeling along the BFS tree of the block
/// visibility graph, then refine at every vertex from the phase-1 labels.
/// A disconnected visibility graph yields fail_disconnected, with the
/// all-zero phase-1 labeling refined anyway.
RecoveryOutcome run_exact_recovery(const GsbmGraph& graph, double chi, double delta,
                                   std::optional<double> eps_override = std::nullopt);

/// max(#{a = b}, #{a = -b}) / |V|, where a 0 entry never matches. 1 for
/// empty inputs.
double agreement(std::span<const Label> a, std::span<const Label> b);

}  // namespace gsbm
