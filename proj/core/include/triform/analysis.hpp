#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "triform/partition.hpp"
#include "triform/spectral.hpp"

namespace triform {

struct BlockSignatureReport {
  std::vector<Edge> edges;
  Signature signature;
  bool degenerate = false;  // n₀ > 3
};

/// Morse-Bott index formula check: n±(H_p) must equal the sums of n± over
/// the sub-Hessians of the independent partition's subframeworks.
struct IndexFormulaReport {
  Signature full;
  std::vector<BlockSignatureReport> blocks;
  int sum_minus = 0;
  int sum_plus = 0;
  bool minus_ok = false;
  bool plus_ok = false;
  /// False when the full orbit or any sub-orbit is degenerate; the formula
  /// check is then not meaningful.
  bool conclusive = false;

  bool pass() const { return conclusive && minus_ok && plus_ok; }
};

IndexFormulaReport verify_morse_bott(const FormationSystem& system,
                                     const Configuration& p_equilibrium,
                                     double collinearity_tol = 1e-7,
                                     double residual_tol = 1e-8);

/// Vector-valued sign function: (1,0,0) for x > tol, (0,1,0) for x < −tol,
/// (0,0,1) otherwise; components are (n₊, n₋, n₀) increments.
std::array<int, 3> sgn_triple(double x, double tol = 0.0);

/// Signature reduction at a collinear equilibrium: removing the last
/// Henneberg vertex (apex) and folding its balance into the parent edge via
/// the auxiliary gain g must shift the A/B signatures by sgn(−A_12−A_13) and
/// sgn(−B_12−B_13). Also runs the congruence construction (α_i, β_i): the
/// assembled Q must diagonalize A_p and B_p.
struct ReductionReport {
  int apex = 0;              // removed vertex (the proof's vertex 1)
  int left = 0, right = 0;   // its neighbors (the proof's vertices 2, 3)
  bool vertex_between = false;  // apex strictly between its neighbors
  double g_value = 0.0;         // g(d_23)
  double g_consistency = 0.0;   // |g from left balance − g from right balance|
  double xg_prime = 0.0;        // (x g(x))' at d_23 = A12·A13/(A12+A13)
  double reduced_residual = 0.0;

  Signature a_full, b_full, a_reduced, b_reduced;
  std::array<int, 3> sgn_a{}, sgn_b{};
  bool a_signature_ok = false;
  bool b_signature_ok = false;

  double congruence_a_offdiag = 0.0;  // max |offdiag| of QᵀA_pQ
  double congruence_b_offdiag = 0.0;
  double congruence_a_diag_err = 0.0;  // vs diag(−A12−A13, λ_1..λ_n)
  double congruence_b_diag_err = 0.0;
  double alpha_identity_residual = 0.0;  // max ‖A_p v*_i − λ_i(0,v_i)‖∞
  double beta_identity_residual = 0.0;

  bool signatures_ok() const { return a_signature_ok && b_signature_ok; }
  bool congruence_ok(double tol = 1e-7) const {
    return congruence_a_offdiag <= tol && congruence_b_offdiag <= tol &&
           congruence_a_diag_err <= tol && congruence_b_diag_err <= tol;
  }
  bool pass(double congruence_tol = 1e-7) const {
    return signatures_ok() && congruence_ok(congruence_tol);
  }
};

ReductionReport verify_reduction_formula(const FormationSystem& system,
                                         const Configuration& p_line_equilibrium,
                                         double align_tol = 1e-9,
                                         double residual_tol = 1e-8);

/// The 2^{N−2} target configurations built by walking the Henneberg steps
/// and choosing one of the two circle–circle intersections per step.
struct TargetOrbitCatalog {
  std::vector<Configuration> entries;   // canonicalized
  std::vector<std::string> sign_words;  // one '+'/'−' char per step
  int expected_count = 0;               // 2^{N−2}
  double min_pairwise_distance = 0.0;   // orbit_distance between entries

  int count() const { return static_cast<int>(entries.size()); }
  /// Index of the nearest entry and its orbit distance.
  std::pair<int, double> nearest(const Configuration& p) const;
};

TargetOrbitCatalog enumerate_target_orbits(const TriangulatedLamanGraph& graph,
                                           const TargetDistances& targets);

struct BasinOptions {
  double box_side_factor = 4.0;  // box side = factor · max target
  double min_separation = 1e-3;
  double horizon = 2000.0;
  double orbit_match_tol = 1e-4;
  IntegratorControls controls;
  bool keep_equilibria = false;
  int threads = 0;  // 0 = hardware concurrency
};

struct BasinReport {
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<int> orbit_hits;  // per catalog entry
  int non_target = 0;
  int failures = 0;
  /// Max |d_ij − d̄_ij| over endpoints classified to a catalog orbit.
  double max_target_distance_error = 0.0;
  std::vector<EquilibriumRecord> equilibria;  // when keep_equilibria

  int target_total() const;
  double target_fraction() const;
};

/// Seeded Monte Carlo over random initial conditions: integrate, refine,
/// classify the endpoint against the target catalog. Deterministic given the
/// seed; per-trial streams are independent of thread scheduling.
BasinReport basin_monte_carlo(const FormationSystem& system, int trials,
                              const BasinOptions& options, std::uint64_t seed);

struct CensusRow {
  bool strongly_rigid = false;
  OrbitClass verdict = OrbitClass::degenerate;
  Signature signature;
  double residual = 0.0;
};

/// Cross-tabulation of strong rigidity against spectral stability. The
/// stable ∧ ¬strongly-rigid and unstable ∧ strongly-rigid cells must be
/// empty.
struct StabilityCensus {
  std::vector<CensusRow> rows;
  int stable_strong = 0;
  int stable_not_strong = 0;
  int unstable_strong = 0;
  int unstable_not_strong = 0;
  int degenerate = 0;

  bool stability_matches_rigidity() const {
    return stable_not_strong == 0 && unstable_strong == 0;
  }
};

StabilityCensus stability_census(const FormationSystem& system,
                                 const std::vector<EquilibriumRecord>& equilibria,
                                 double collinearity_tol = 1e-7);

}  // namespace triform
