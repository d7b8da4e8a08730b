#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "triform/rng.hpp"

namespace triform {

/// Unordered vertex pair, stored as (min, max). Vertices are 1-based.
using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// One vertex-add operation: new_vertex joins the endpoints of parent.
struct HennebergStep {
  int new_vertex = 0;
  Edge parent{0, 0};
};

/// A Laman graph built purely by vertex-add steps, each new vertex attached
/// to the two endpoints of an existing edge. Vertices are labeled 1..N in
/// appearance order; the step sequence is kept because the independent
/// partition is computed relative to it.
class TriangulatedLamanGraph {
 public:
  /// Empty placeholder; only from_steps yields a usable graph.
  TriangulatedLamanGraph() = default;

  /// Builds the graph from a step sequence. The empty sequence gives the
  /// base graph V={1,2}, E={(1,2)}. Throws std::invalid_argument naming the
  /// offending step if a parent edge is absent or a vertex label is out of
  /// order.
  static TriangulatedLamanGraph from_steps(const std::vector<HennebergStep>& steps);

  int vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }  // lexicographic
  const std::vector<HennebergStep>& steps() const { return steps_; }

  bool has_edge(int a, int b) const;
  /// Index of an edge in edges(); throws if absent.
  int edge_index(int a, int b) const;
  int edge_index(const Edge& e) const { return edge_index(e.first, e.second); }
  const std::vector<int>& neighbors(int v) const;

  /// All vertex triples whose three edges exist, lexicographically sorted.
  std::vector<std::array<int, 3>> three_cycles() const;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<HennebergStep> steps_;
  std::map<Edge, int> edge_index_;
  std::vector<std::vector<int>> adjacency_;  // adjacency_[v-1], sorted
};

inline TriangulatedLamanGraph build_graph(const std::vector<HennebergStep>& steps) {
  return TriangulatedLamanGraph::from_steps(steps);
}

/// Result of the inverse construction. Steps use canonical labels 1..N;
/// original_label[v-1] is the input label of canonical vertex v.
struct RecoveredSequence {
  std::vector<HennebergStep> steps;
  std::vector<int> original_label;

  TriangulatedLamanGraph graph() const { return build_graph(steps); }
};

/// Inverse construction: repeatedly removes a degree-2 vertex whose two
/// neighbors are adjacent (smallest label first). Returns nullopt when the
/// input is not a triangulated Laman graph. Vertices may carry arbitrary
/// distinct positive labels.
std::optional<RecoveredSequence> recover_henneberg(const std::vector<int>& vertices,
                                                   const std::vector<Edge>& edges);

/// Same, with ties between removable vertices broken uniformly at random.
std::optional<RecoveredSequence> recover_henneberg(const std::vector<int>& vertices,
                                                   const std::vector<Edge>& edges,
                                                   RngStream& rng);

using TargetDistances = std::map<Edge, double>;

struct TriangleViolation {
  std::array<int, 3> cycle;
  std::array<double, 3> lengths;  // d(i,j), d(i,k), d(j,k)
};

struct TargetValidation {
  std::vector<TriangleViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the strict triangle inequalities on every 3-cycle. Targets must
/// cover every edge with a strictly positive value; a missing or nonpositive
/// entry throws std::invalid_argument naming the edge.
TargetValidation validate_targets(const TriangulatedLamanGraph& graph,
                                  const TargetDistances& targets);

/// Random Henneberg sequence on N vertices: each step picks its parent edge
/// uniformly among existing edges.
std::vector<HennebergStep> random_steps(int vertex_count, RngStream& rng);

}  // namespace triform
