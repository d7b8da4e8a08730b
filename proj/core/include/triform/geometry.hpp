#pragma once

#include <Eigen/Dense>
#include <vector>

#include "triform/graph.hpp"

namespace triform {

using Vec2 = Eigen::Vector2d;

/// Planar positions of N agents.
struct Configuration {
  std::vector<Vec2> points;

  Configuration() = default;
  explicit Configuration(std::vector<Vec2> pts) : points(std::move(pts)) {}

  int size() const { return static_cast<int>(points.size()); }
  /// 1-based agent access, matching vertex labels.
  Vec2& at(int v) { return points[v - 1]; }
  const Vec2& at(int v) const { return points[v - 1]; }

  /// Interleaved flat vector (x1, y1, ..., xN, yN).
  Eigen::VectorXd flat() const;
  static Configuration from_flat(const Eigen::VectorXd& v);
};

/// True iff adjacent agents occupy distinct positions (membership in P_G).
bool in_configuration_space(const TriangulatedLamanGraph& graph,
                            const Configuration& p);

/// Rigid motion (θ, v): x ↦ R(θ)x + v, det R = +1.
struct SE2Element {
  double theta = 0.0;
  Vec2 v = Vec2::Zero();

  static SE2Element identity() { return {}; }
  Eigen::Matrix2d rotation() const;
};

/// Group law (θ₂θ₁, θ₂v₁ + v₂).
SE2Element se2_compose(const SE2Element& g2, const SE2Element& g1);
Configuration se2_apply(const SE2Element& g, const Configuration& p);

/// Squared edge lengths in lexicographic edge order.
Eigen::VectorXd rho(const TriangulatedLamanGraph& graph, const Configuration& p);

/// Jacobian of rho: |E| x 2N, interleaved coordinates.
Eigen::MatrixXd rigidity_jacobian(const TriangulatedLamanGraph& graph,
                                  const Configuration& p);

/// Rank of the rigidity Jacobian equals 2N − 3 (singular values above
/// rank_tol·σ_max counted).
bool is_infinitesimally_rigid(const TriangulatedLamanGraph& graph,
                              const Configuration& p, double rank_tol = 1e-8);

/// |cross(b−a, c−a)| / (‖b−a‖·‖c−a‖); 0 when a segment degenerates.
double collinearity_measure(const Vec2& a, const Vec2& b, const Vec2& c);

/// Every 3-cycle embeds as a nondegenerate triangle (normalized area above
/// collinearity_tol).
bool is_strongly_rigid(const TriangulatedLamanGraph& graph,
                       const Configuration& p, double collinearity_tol = 1e-7);

/// All points collinear within tol (measured against the farthest pair).
bool is_line_configuration(const Configuration& p, double tol = 1e-7);

/// Min over SE(2) (rotations only, no reflections) of the RMS point mismatch
/// after centroid matching and optimal rotation.
double orbit_distance(const Configuration& p, const Configuration& q);

/// Orbit representative: agent 1 at the origin, agent 2 on the positive
/// x-axis. Throws std::domain_error when agents 1 and 2 coincide.
Configuration canonicalize(const Configuration& p);

}  // namespace triform
