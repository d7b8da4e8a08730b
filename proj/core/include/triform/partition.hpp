#pragma once

#include <vector>

#include "triform/dynamics.hpp"
#include "triform/geometry.hpp"
#include "triform/graph.hpp"

namespace triform {

/// One block E_i of the independent partition together with its induced
/// subframework (G_i, p_i).
struct PartitionBlock {
  std::vector<Edge> edges;     // parent-graph labels, lexicographic
  std::vector<int> vertices;   // incident vertices, ascending
  /// Subgraph in canonical labels 1..|V_i|; vertex_label[v-1] maps back to
  /// the parent graph.
  TriangulatedLamanGraph subgraph;
  std::vector<int> vertex_label;
  /// Unit direction of the block's line (canonical sign), zero for pairs of
  /// coincident extremes.
  Vec2 line_direction = Vec2::Zero();

  Configuration restrict_configuration(const Configuration& p) const;
};

struct IndependentPartition {
  std::vector<PartitionBlock> blocks;
  /// Steps whose collinearity measure fell within 10× of the tolerance; a
  /// nonempty list marks the partition as fragile.
  std::vector<int> fragile_steps;  // 1-based step indices
  double collinearity_tol = 0.0;

  bool fragile() const { return !fragile_steps.empty(); }
  std::size_t block_count() const { return blocks.size(); }
  /// Index of the block containing the edge; throws when absent.
  int block_of(const Edge& e) const;
};

/// Start from the base block {(1,2)} and walk the Henneberg steps, merging
/// the two new edges into the parent edge's block when the three step points
/// are aligned, else opening two singleton blocks.
IndependentPartition independent_partition(const TriangulatedLamanGraph& graph,
                                           const Configuration& p,
                                           double collinearity_tol = 1e-7);

/// True iff every subframework configuration is an equilibrium of its
/// induced subsystem at residual ≤ 10·tol. The input must itself be an
/// equilibrium at residual ≤ tol (std::invalid_argument otherwise).
bool partition_is_equilibrium_compatible(const FormationSystem& system,
                                         const Configuration& p,
                                         const IndependentPartition& partition,
                                         double tol = 1e-7);

/// The subsystem induced by a block: graph G_i with the parent laws on its
/// edges. agents[v-1] gives the parent agent of canonical vertex v.
struct InducedSubsystem {
  FormationSystem system;
  std::vector<int> agents;

  Configuration restrict_configuration(const Configuration& p) const;
};

InducedSubsystem induced_subsystem(const FormationSystem& system,
                                   const PartitionBlock& block);

}  // namespace triform
