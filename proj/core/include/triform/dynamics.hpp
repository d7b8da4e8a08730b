#pragma once

#include <string>
#include <vector>

#include "triform/geometry.hpp"
#include "triform/graph.hpp"
#include "triform/laws.hpp"

namespace triform {

/// A triangulated Laman graph with one interaction law per edge. Constructed
/// only through create(), which checks law coverage and the triangle
/// inequalities on the law targets.
class FormationSystem {
 public:
  static FormationSystem create(TriangulatedLamanGraph graph,
                                std::vector<InteractionLaw> laws_by_edge);
  /// Same law family and target on every edge.
  static FormationSystem uniform(TriangulatedLamanGraph graph,
                                 const std::string& family, double dbar);

  const TriangulatedLamanGraph& graph() const { return graph_; }
  int agent_count() const { return graph_.vertex_count(); }
  const InteractionLaw& law(int edge_index) const { return laws_[edge_index]; }
  const InteractionLaw& law(const Edge& e) const {
    return laws_[graph_.edge_index(e)];
  }
  TargetDistances targets() const;

 private:
  TriangulatedLamanGraph graph_;
  std::vector<InteractionLaw> laws_;
};

/// Φ(p) = Σ over edges of ∫₁^{d_ij} t f_ij(t) dt. Throws std::domain_error
/// outside P_G (coincident adjacent agents).
double potential(const FormationSystem& system, const Configuration& p);

/// RHS of the equations of motion, ẋ_i = Σ_j f_ij(d_ij)(x_j − x_i); equals
/// −∇Φ componentwise.
std::vector<Vec2> vector_field(const FormationSystem& system,
                               const Configuration& p);
Eigen::VectorXd vector_field_flat(const FormationSystem& system,
                                  const Configuration& p);

/// ‖∇Φ(p)‖∞.
double gradient_inf_norm(const FormationSystem& system, const Configuration& p);

struct IntegratorControls {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Early stop once ‖∇Φ‖∞ falls below this.
  double equilibrium_tol = 1e-7;
  /// Snapshot spacing; <= 0 records every accepted step.
  double sample_interval = 0.5;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  double max_step = 10.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> snapshots;
  std::vector<double> potentials;
  std::vector<double> gradient_norms;  // ‖∇Φ‖∞
  bool reached_equilibrium = false;
  bool failed = false;
  std::string failure;

  const Configuration& final_configuration() const { return snapshots.back(); }
};

/// Adaptive Dormand–Prince 5(4) integration of the gradient flow up to
/// `horizon`, stopping early at equilibria. Step-size underflow (the
/// near-collision regime) marks the trajectory failed and keeps the last
/// valid state.
Trajectory integrate(const FormationSystem& system, const Configuration& p0,
                     double horizon, const IntegratorControls& controls = {});

struct EquilibriumRecord {
  Configuration configuration;
  double residual = 0.0;  // ‖∇Φ‖∞
  std::string method;
  bool refined = false;
};

struct RefineOptions {
  /// Precondition: input residual must be below this.
  double coarse_threshold = 1e-2;
  double target_residual = 1e-10;
  int max_iterations = 60;
};

/// Gauge-fixed Newton on ∇Φ = 0: coordinates x₁, y₁, y₂ are pinned, which
/// removes the three SE(2) null directions. Internally the configuration is
/// rotated about agent 1 so agent 2 lies along +x (and rotated back), keeping
/// the reduced Jacobian well conditioned. Newton divergence returns the input
/// with its residual and refined = false.
EquilibriumRecord refine_equilibrium(const FormationSystem& system,
                                     const Configuration& p_near,
                                     const RefineOptions& options = {});

/// All distinct collinear equilibria with the given left-to-right agent
/// ordering, found by damped Newton on the 1-D balance equations from a
/// family of equispaced starts. Configurations are returned embedded on the
/// x-axis. Empty when no start converges.
std::vector<EquilibriumRecord> find_line_equilibria(
    const FormationSystem& system, const std::vector<int>& ordering);

/// Agent orderings for line-equilibrium searches, up to reversal.
std::vector<std::vector<int>> line_orderings(int agent_count);

}  // namespace triform
