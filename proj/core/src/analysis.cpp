#include "triform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace triform {

IndexFormulaReport verify_morse_bott(const FormationSystem& system,
                                     const Configuration& p,
                                     double collinearity_tol,
                                     double residual_tol) {
  const double residual = gradient_inf_norm(system, p);
  if (residual > residual_tol)
    throw std::invalid_argument("verify_morse_bott needs a refined equilibrium");

  IndexFormulaReport report;
  report.full = signature_of(hessian(system, p));

  const IndependentPartition partition =
      independent_partition(system.graph(), p, collinearity_tol);
  bool blocks_ok = true;
  for (const PartitionBlock& block : partition.blocks) {
    const InducedSubsystem sub = induced_subsystem(system, block);
    const Configuration pi = sub.restrict_configuration(p);
    BlockSignatureReport bs;
    bs.edges = block.edges;
    bs.signature = signature_of(hessian(sub.system, pi));
    bs.degenerate = bs.signature.n_zero > 3;
    blocks_ok = blocks_ok && !bs.degenerate;
    report.sum_minus += bs.signature.n_minus;
    report.sum_plus += bs.signature.n_plus;
    report.blocks.push_back(std::move(bs));
  }
  report.minus_ok = report.full.n_minus == report.sum_minus;
  report.plus_ok = report.full.n_plus == report.sum_plus;
  report.conclusive = blocks_ok && report.full.n_zero == 3;
  return report;
}

std::array<int, 3> sgn_triple(double x, double tol) {
  if (x > tol) return {1, 0, 0};
  if (x < -tol) return {0, 1, 0};
  return {0, 0, 1};
}

namespace {

struct EigReduction {
  double offdiag = 0.0;
  double diag_err = 0.0;
  double identity_residual = 0.0;
};

// Builds Q = [e_apex, w*_1 .. w*_n] from the reduced matrix's orthonormal
// eigenvectors, each lifted by the apex weight, and measures how far QᵀMQ is
// from diag(head, λ_1..λ_n).
EigReduction congruence_check(
    const Eigen::MatrixXd& full, const Eigen::MatrixXd& reduced, int apex_idx,
    double head,
    const std::function<double(const Eigen::VectorXd&)>& apex_weight,
    const std::vector<int>& reduced_to_full) {
  const int n = static_cast<int>(reduced.rows());
  const int dim = static_cast<int>(full.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  q(apex_idx, 0) = 1.0;
  EigReduction out;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd v = solver.eigenvectors().col(i);
    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(dim);
    for (int r = 0; r < n; ++r) lifted[reduced_to_full[r]] = v[r];
    lifted[apex_idx] = apex_weight(v);
    q.col(i + 1) = lifted;

    // A_p v* = λ (0, v): the lifted image must vanish on the apex row.
    Eigen::VectorXd image = full * lifted;
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(dim);
    for (int r = 0; r < n; ++r)
      expected[reduced_to_full[r]] = solver.eigenvalues()[i] * v[r];
    out.identity_residual = std::max(
        out.identity_residual, (image - expected).cwiseAbs().maxCoeff());
  }

  const Eigen::MatrixXd d = q.transpose() * full * q;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      if (r == c) continue;
      out.offdiag = std::max(out.offdiag, std::abs(d(r, c)));
    }
  out.diag_err = std::abs(d(0, 0) - head);
  for (int i = 0; i < n; ++i)
    out.diag_err =
        std::max(out.diag_err, std::abs(d(i + 1, i + 1) - solver.eigenvalues()[i]));
  return out;
}

}  // namespace

ReductionReport verify_reduction_formula(const FormationSystem& system,
                                         const Configuration& p,
                                         double align_tol,
                                         double residual_tol) {
  const int n = system.agent_count();
  if (n < 4)
    throw std::invalid_argument("reduction formula needs at least 4 agents");
  const double residual = gradient_inf_norm(system, p);
  if (residual > residual_tol)
    throw std::invalid_argument(
        "verify_reduction_formula needs a refined equilibrium");

  const HennebergStep last = system.graph().steps().back();
  ReductionReport report;
  report.apex = last.new_vertex;  // always N
  report.left = last.parent.first;
  report.right = last.parent.second;

  const LineBlockHessian full = line_block_hessian(system, p, align_tol);

  const double xv = p.at(report.apex).x();
  const double xj = p.at(report.left).x();
  const double xk = p.at(report.right).x();
  report.vertex_between = (xv - xj) * (xv - xk) < 0.0;

  const double a12 = full.A(report.apex - 1, report.left - 1);
  const double a13 = full.A(report.apex - 1, report.right - 1);
  const double b12 = full.B(report.apex - 1, report.left - 1);
  const double b13 = full.B(report.apex - 1, report.right - 1);

  // g(d_23) rebalances the parent edge once the apex is removed; the two
  // balance routes must agree at an equilibrium.
  const double g_left = b12 * (xv - xj) / (xk - xj);
  const double g_right = b13 * (xv - xk) / (xj - xk);
  report.g_value = g_left;
  report.g_consistency = std::abs(g_left - g_right);
  report.xg_prime = a12 * a13 / (a12 + a13);

  // Reduced matrices on vertices 1..N−1 with the (left,right) entry folded.
  const int m = n - 1;
  Eigen::MatrixXd a_red = full.A.topLeftCorner(m, m);
  Eigen::MatrixXd b_red = full.B.topLeftCorner(m, m);
  // Remove the apex column contribution from the diagonals.
  for (int r = 0; r < m; ++r) {
    a_red(r, r) += full.A(r, n - 1);
    b_red(r, r) += full.B(r, n - 1);
  }
  const int lj = report.left - 1, rk = report.right - 1;
  a_red(lj, rk) += report.xg_prime;
  a_red(rk, lj) += report.xg_prime;
  a_red(lj, lj) -= report.xg_prime;
  a_red(rk, rk) -= report.xg_prime;
  b_red(lj, rk) += report.g_value;
  b_red(rk, lj) += report.g_value;
  b_red(lj, lj) -= report.g_value;
  b_red(rk, rk) -= report.g_value;

  Eigen::VectorXd a_coords(m);
  for (int r = 0; r < m; ++r) a_coords[r] = p.points[r].x();
  report.reduced_residual = (b_red * a_coords).cwiseAbs().maxCoeff();

  report.a_full = signature_of(full.A);
  report.b_full = signature_of(full.B);
  report.a_reduced = signature_of(a_red);
  report.b_reduced = signature_of(b_red);
  report.sgn_a = sgn_triple(-a12 - a13, report.a_full.zero_tol);
  report.sgn_b = sgn_triple(-b12 - b13, report.b_full.zero_tol);

  report.a_signature_ok =
      report.a_full.n_plus == report.a_reduced.n_plus + report.sgn_a[0] &&
      report.a_full.n_minus == report.a_reduced.n_minus + report.sgn_a[1] &&
      report.a_full.n_zero == report.a_reduced.n_zero + report.sgn_a[2];
  report.b_signature_ok =
      report.b_full.n_plus == report.b_reduced.n_plus + report.sgn_b[0] &&
      report.b_full.n_minus == report.b_reduced.n_minus + report.sgn_b[1] &&
      report.b_full.n_zero == report.b_reduced.n_zero + report.sgn_b[2];

  std::vector<int> reduced_to_full(m);
  for (int r = 0; r < m; ++r) reduced_to_full[r] = r;
  const int apex_idx = n - 1;

  const EigReduction a_check = congruence_check(
      full.A, a_red, apex_idx, -a12 - a13,
      [&](const Eigen::VectorXd& v) {
        return (a12 * v[lj] + a13 * v[rk]) / (a12 + a13);
      },
      reduced_to_full);
  const EigReduction b_check = congruence_check(
      full.B, b_red, apex_idx, -b12 - b13,
      [&](const Eigen::VectorXd& v) {
        return ((xk - xv) * v[lj] + (xv - xj) * v[rk]) / (xk - xj);
      },
      reduced_to_full);

  report.congruence_a_offdiag = a_check.offdiag;
  report.congruence_a_diag_err = a_check.diag_err;
  report.alpha_identity_residual = a_check.identity_residual;
  report.congruence_b_offdiag = b_check.offdiag;
  report.congruence_b_diag_err = b_check.diag_err;
  report.beta_identity_residual = b_check.identity_residual;
  return report;
}

std::pair<int, double> TargetOrbitCatalog::nearest(const Configuration& p) const {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double d = orbit_distance(entries[i], p);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return {best, best_dist};
}

TargetOrbitCatalog enumerate_target_orbits(const TriangulatedLamanGraph& graph,
                                           const TargetDistances& targets) {
  const TargetValidation validation = validate_targets(graph, targets);
  if (!validation.ok())
    throw std::invalid_argument(
        "targets violate the triangle inequalities on " +
        std::to_string(validation.violations.size()) + " cycle(s)");

  const int n = graph.vertex_count();
  const int steps = n - 2;
  if (steps > 24) throw std::invalid_argument("catalog too large (N > 26)");

  TargetOrbitCatalog catalog;
  catalog.expected_count = 1 << steps;

  auto target = [&](int a, int b) { return targets.at(make_edge(a, b)); };

  for (int word = 0; word < (1 << steps); ++word) {
    Configuration p;
    p.points.resize(n);
    p.points[0] = Vec2(0.0, 0.0);
    p.points[1] = Vec2(target(1, 2), 0.0);
    std::string word_str;
    for (int s = 0; s < steps; ++s) {
      const HennebergStep& step = graph.steps()[s];
      const int j = step.parent.first, k = step.parent.second;
      const Vec2 cj = p.at(j), ck = p.at(k);
      const double span = (ck - cj).norm();
      const double rj = target(j, step.new_vertex);
      const double rk = target(k, step.new_vertex);
      const double along = (span * span + rj * rj - rk * rk) / (2.0 * span);
      const double h2 = rj * rj - along * along;
      if (!(h2 > 0.0))
        throw std::runtime_error(
            "degenerate circle intersection; targets violate the strict "
            "triangle inequalities");
      const Vec2 axis = (ck - cj) / span;
      const Vec2 normal(-axis.y(), axis.x());
      const double side = (word >> s) & 1 ? -1.0 : 1.0;
      p.at(step.new_vertex) = cj + along * axis + side * std::sqrt(h2) * normal;
      word_str.push_back(side > 0 ? '+' : '-');
    }

    const Configuration canonical = canonicalize(p);
    bool duplicate = false;
    for (const Configuration& existing : catalog.entries) {
      if (orbit_distance(existing, canonical) < 1e-8) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      catalog.entries.push_back(canonical);
      catalog.sign_words.push_back(word_str);
    }
  }

  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < catalog.entries.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.entries.size(); ++j)
      min_dist = std::min(min_dist,
                          orbit_distance(catalog.entries[i], catalog.entries[j]));
  catalog.min_pairwise_distance =
      catalog.entries.size() > 1 ? min_dist : 0.0;
  return catalog;
}

int BasinReport::target_total() const {
  int total = 0;
  for (int h : orbit_hits) total += h;
  return total;
}

double BasinReport::target_fraction() const {
  return trials > 0 ? static_cast<double>(target_total()) / trials : 0.0;
}

namespace {

struct TrialOutcome {
  int orbit = -1;  // catalog index, -1 non-target, -2 failure
  double distance_error = 0.0;
  bool keep = false;
  EquilibriumRecord record;
};

}  // namespace

BasinReport basin_monte_carlo(const FormationSystem& system, int trials,
                              const BasinOptions& options, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");

  const TargetOrbitCatalog catalog =
      enumerate_target_orbits(system.graph(), system.targets());

  double max_target = 0.0;
  for (const auto& [e, d] : system.targets()) max_target = std::max(max_target, d);
  const double half_side = 0.5 * options.box_side_factor * max_target;

  IntegratorControls controls = options.controls;
  controls.sample_interval = options.horizon;  // endpoints only

  const int n = system.agent_count();
  const TargetDistances targets = system.targets();
  auto run_trial = [&](int trial) {
    TrialOutcome outcome;
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(trial));

    Configuration p0;
    p0.points.resize(n);
    bool valid = false;
    for (int attempt = 0; attempt < 1000 && !valid; ++attempt) {
      for (int i = 0; i < n; ++i)
        p0.points[i] =
            Vec2(rng.uniform(-half_side, half_side), rng.uniform(-half_side, half_side));
      valid = true;
      for (const Edge& e : system.graph().edges())
        valid = valid && (p0.at(e.first) - p0.at(e.second)).norm() >=
                             options.min_separation;
    }
    if (!valid) {
      outcome.orbit = -2;
      return outcome;
    }

    Trajectory traj;
    try {
      traj = integrate(system, p0, options.horizon, controls);
    } catch (const std::exception&) {
      outcome.orbit = -2;
      return outcome;
    }
    if (traj.failed || !traj.reached_equilibrium) {
      outcome.orbit = -2;
      return outcome;
    }

    EquilibriumRecord rec;
    try {
      rec = refine_equilibrium(system, traj.final_configuration());
    } catch (const std::exception&) {
      outcome.orbit = -2;
      return outcome;
    }
    if (!rec.refined) {
      outcome.orbit = -2;
      return outcome;
    }

    if (options.keep_equilibria) {
      outcome.keep = true;
      outcome.record = rec;
    }

    const auto [idx, dist] = catalog.nearest(rec.configuration);
    if (idx >= 0 && dist < options.orbit_match_tol) {
      outcome.orbit = idx;
      double err = 0.0;
      for (const Edge& e : system.graph().edges()) {
        const double d =
            (rec.configuration.at(e.first) - rec.configuration.at(e.second)).norm();
        err = std::max(err, std::abs(d - targets.at(e)));
      }
      outcome.distance_error = err;
    } else {
      outcome.orbit = -1;
    }
    return outcome;
  };

  std::vector<TrialOutcome> outcomes(trials);
  int thread_count = options.threads > 0
                         ? options.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min(thread_count, trials));
  if (thread_count == 1) {
    for (int t = 0; t < trials; ++t) outcomes[t] = run_trial(t);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < thread_count; ++w)
      workers.emplace_back([&, w]() {
        for (int t = w; t < trials; t += thread_count) outcomes[t] = run_trial(t);
      });
    for (auto& worker : workers) worker.join();
  }

  BasinReport report;
  report.trials = trials;
  report.seed = seed;
  report.orbit_hits.assign(catalog.entries.size(), 0);
  for (const TrialOutcome& outcome : outcomes) {
    if (outcome.orbit >= 0) {
      ++report.orbit_hits[outcome.orbit];
      report.max_target_distance_error =
          std::max(report.max_target_distance_error, outcome.distance_error);
    } else if (outcome.orbit == -1) {
      ++report.non_target;
    } else {
      ++report.failures;
    }
    if (outcome.keep) report.equilibria.push_back(outcome.record);
  }
  return report;
}

StabilityCensus stability_census(const FormationSystem& system,
                                 const std::vector<EquilibriumRecord>& equilibria,
                                 double collinearity_tol) {
  StabilityCensus census;
  for (const EquilibriumRecord& rec : equilibria) {
    CensusRow row;
    row.strongly_rigid =
        is_strongly_rigid(system.graph(), rec.configuration, collinearity_tol);
    const OrbitClassification cls = classify_orbit(system, rec.configuration);
    row.verdict = cls.verdict;
    row.signature = cls.signature;
    row.residual = rec.residual;
    census.rows.push_back(row);

    if (cls.verdict == OrbitClass::degenerate) {
      ++census.degenerate;
    } else if (cls.verdict == OrbitClass::stable) {
      row.strongly_rigid ? ++census.stable_strong : ++census.stable_not_strong;
    } else {
      row.strongly_rigid ? ++census.unstable_strong : ++census.unstable_not_strong;
    }
  }
  return census;
}

}  // namespace triform
