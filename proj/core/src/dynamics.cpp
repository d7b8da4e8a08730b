#include "triform/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "triform/spectral.hpp"

namespace triform {

FormationSystem FormationSystem::create(TriangulatedLamanGraph graph,
                                        std::vector<InteractionLaw> laws_by_edge) {
  if (laws_by_edge.size() != graph.edges().size())
    throw std::invalid_argument("need exactly one law per edge");
  FormationSystem sys;
  sys.graph_ = std::move(graph);
  sys.laws_ = std::move(laws_by_edge);
  TargetDistances targets;
  for (std::size_t k = 0; k < sys.graph_.edges().size(); ++k)
    targets[sys.graph_.edges()[k]] = sys.laws_[k].target();
  const TargetValidation v = validate_targets(sys.graph_, targets);
  if (!v.ok())
    throw std::invalid_argument(
        "law targets violate the triangle inequalities on " +
        std::to_string(v.violations.size()) + " cycle(s)");
  return sys;
}

FormationSystem FormationSystem::uniform(TriangulatedLamanGraph graph,
                                         const std::string& family, double dbar) {
  std::vector<InteractionLaw> laws(graph.edges().size(), make_law(family, dbar));
  return create(std::move(graph), std::move(laws));
}

TargetDistances FormationSystem::targets() const {
  TargetDistances t;
  for (std::size_t k = 0; k < graph_.edges().size(); ++k)
    t[graph_.edges()[k]] = laws_[k].target();
  return t;
}

namespace {

double edge_length_checked(const Configuration& p, const Edge& e) {
  const double d = (p.at(e.first) - p.at(e.second)).norm();
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::domain_error("configuration outside P_G: agents " +
                            std::to_string(e.first) + " and " +
                            std::to_string(e.second) + " coincide");
  return d;
}

}  // namespace

double potential(const FormationSystem& system, const Configuration& p) {
  if (p.size() != system.agent_count())
    throw std::invalid_argument("configuration size does not match system");
  double phi = 0.0;
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k)
    phi += system.law(static_cast<int>(k))
               .edge_potential(edge_length_checked(p, edges[k]));
  return phi;
}

std::vector<Vec2> vector_field(const FormationSystem& system,
                               const Configuration& p) {
  if (p.size() != system.agent_count())
    throw std::invalid_argument("configuration size does not match system");
  std::vector<Vec2> field(p.size(), Vec2::Zero());
  const auto& edges = system.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const double d = edge_length_checked(p, e);
    const double gain = system.law(static_cast<int>(k)).f(d);
    const Vec2 pull = gain * (p.at(e.second) - p.at(e.first));
    field[e.first - 1] += pull;
    field[e.second - 1] -= pull;
  }
  return field;
}

Eigen::VectorXd vector_field_flat(const FormationSystem& system,
                                  const Configuration& p) {
  const std::vector<Vec2> f = vector_field(system, p);
  Eigen::VectorXd v(2 * p.size());
  for (int i = 0; i < p.size(); ++i) {
    v[2 * i] = f[i].x();
    v[2 * i + 1] = f[i].y();
  }
  return v;
}

double gradient_inf_norm(const FormationSystem& system, const Configuration& p) {
  double norm = 0.0;
  for (const Vec2& f : vector_field(system, p))
    norm = std::max(norm, std::max(std::abs(f.x()), std::abs(f.y())));
  return norm;
}

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b − b*, the embedded error weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace

Trajectory integrate(const FormationSystem& system, const Configuration& p0,
                     double horizon, const IntegratorControls& controls) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!in_configuration_space(system.graph(), p0))
    throw std::domain_error("initial configuration outside P_G");

  Trajectory traj;
  auto record = [&](double t, const Eigen::VectorXd& y, double grad_norm) {
    const Configuration cfg = Configuration::from_flat(y);
    traj.times.push_back(t);
    traj.snapshots.push_back(cfg);
    traj.potentials.push_back(potential(system, cfg));
    traj.gradient_norms.push_back(grad_norm);
  };

  auto field = [&](const Eigen::VectorXd& y) {
    return vector_field_flat(system, Configuration::from_flat(y));
  };

  Eigen::VectorXd y = p0.flat();
  double t = 0.0;
  Eigen::VectorXd k1 = field(y);
  record(0.0, y, inf_norm(k1));
  if (inf_norm(k1) < controls.equilibrium_tol) {
    traj.reached_equilibrium = true;
    return traj;
  }

  const double sample =
      controls.sample_interval > 0.0 ? controls.sample_interval : 0.0;
  double next_sample = sample > 0.0 ? sample : 0.0;
  double h = std::min(controls.initial_step, horizon);
  const int n = static_cast<int>(y.size());
  Eigen::VectorXd k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ynew(n), yerr(n);

  while (t < horizon) {
    h = std::min({h, controls.max_step, horizon - t});
    if (sample > 0.0 && t < next_sample) h = std::min(h, next_sample - t);
    if (h < controls.min_step) {
      traj.failed = true;
      traj.failure = "step-size underflow (near-collision)";
      return traj;
    }

    bool step_ok = true;
    try {
      k2 = field(y + h * (a21 * k1));
      k3 = field(y + h * (a31 * k1 + a32 * k2));
      k4 = field(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = field(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = field(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = field(ynew);  // FSAL
    } catch (const std::domain_error&) {
      step_ok = false;  // a stage stepped through a collision
    }

    double err = 0.0;
    if (step_ok) {
      yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double scale = controls.abs_tol +
                             controls.rel_tol *
                                 std::max(std::abs(y[i]), std::abs(ynew[i]));
        acc += (yerr[i] / scale) * (yerr[i] / scale);
      }
      err = std::sqrt(acc / n);
    }

    if (!step_ok || !(err <= 1.0)) {
      const double shrink = step_ok && std::isfinite(err)
                                ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                                : 0.25;
      h *= shrink;
      continue;
    }

    t += h;
    y.swap(ynew);
    k1.swap(k7);
    const double grad_norm = inf_norm(k1);

    const bool at_sample =
        sample > 0.0 ? (t >= next_sample - 1e-12) : true;
    if (at_sample) {
      record(t, y, grad_norm);
      if (sample > 0.0)
        while (next_sample <= t + 1e-12) next_sample += sample;
    }

    if (grad_norm < controls.equilibrium_tol) {
      if (!at_sample) record(t, y, grad_norm);
      traj.reached_equilibrium = true;
      return traj;
    }

    const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }

  if (traj.times.back() != t) record(t, y, inf_norm(k1));
  return traj;
}

namespace {

// Free coordinate indices once x1, y1, y2 are pinned.
std::vector<int> free_indices(int agent_count) {
  std::vector<int> idx;
  for (int i = 0; i < 2 * agent_count; ++i)
    if (i != 0 && i != 1 && i != 3) idx.push_back(i);
  return idx;
}

}  // namespace

EquilibriumRecord refine_equilibrium(const FormationSystem& system,
                                     const Configuration& p_near,
                                     const RefineOptions& options) {
  const double input_residual = gradient_inf_norm(system, p_near);
  if (input_residual > options.coarse_threshold)
    throw std::invalid_argument(
        "refine_equilibrium: input residual above coarse threshold");
  if (input_residual <= options.target_residual)
    return {p_near, input_residual, "input", true};

  const int n = system.agent_count();
  if (n < 2) return {p_near, input_residual, "input", true};
  const Vec2 gauge_dir = p_near.points[1] - p_near.points[0];
  if (gauge_dir.norm() == 0.0)
    return {p_near, input_residual, "gauge-degenerate", false};

  // Work in the rotated frame where agent 2 sits along +x from agent 1; the
  // inverse rotation is applied on exit.
  const double phi = std::atan2(gauge_dir.y(), gauge_dir.x());
  const Vec2 pivot = p_near.points[0];
  SE2Element to_frame{-phi, pivot - SE2Element{-phi, Vec2::Zero()}.rotation() * pivot};
  SE2Element from_frame{phi, pivot - SE2Element{phi, Vec2::Zero()}.rotation() * pivot};

  Configuration work = se2_apply(to_frame, p_near);
  const std::vector<int> free = free_indices(n);
  const int m = static_cast<int>(free.size());

  Eigen::VectorXd y = work.flat();
  // Converge the full residual; the √2 headroom covers the inf-norm change
  // under the frame rotation applied on exit.
  const double frame_target = options.target_residual / 2.0;

  Eigen::VectorXd r = vector_field_flat(system, Configuration::from_flat(y));
  double rnorm = inf_norm(r);
  bool converged = rnorm <= frame_target;
  for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
    const Eigen::MatrixXd jac_full =
        hessian(system, Configuration::from_flat(y));
    Eigen::MatrixXd jac(m, m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
      rhs[i] = -r[free[i]];
      for (int j = 0; j < m; ++j) jac(i, j) = jac_full(free[i], free[j]);
    }
    const Eigen::VectorXd delta = jac.fullPivLu().solve(rhs);
    if (!delta.allFinite()) break;

    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt, lambda *= 0.5) {
      Eigen::VectorXd trial = y;
      for (int i = 0; i < m; ++i) trial[free[i]] += lambda * delta[i];
      try {
        const Eigen::VectorXd rt =
            vector_field_flat(system, Configuration::from_flat(trial));
        const double tnorm = inf_norm(rt);
        if (tnorm < rnorm) {
          y = trial;
          r = rt;
          rnorm = tnorm;
          accepted = true;
          break;
        }
      } catch (const std::domain_error&) {
        // step left P_G; backtrack
      }
    }
    if (!accepted) break;
    converged = rnorm <= frame_target;
  }

  const Configuration refined =
      se2_apply(from_frame, Configuration::from_flat(y));
  const double full_residual = gradient_inf_norm(system, refined);
  if (converged && full_residual <= options.target_residual)
    return {refined, full_residual, "newton", true};
  return {p_near, input_residual, "newton-diverged", false};
}

std::vector<EquilibriumRecord> find_line_equilibria(
    const FormationSystem& system, const std::vector<int>& ordering) {
  const int n = system.agent_count();
  {
    std::vector<int> sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(n);
    std::iota(expect.begin(), expect.end(), 1);
    if (sorted != expect)
      throw std::invalid_argument("ordering must be a permutation of 1..N");
  }

  double mean_target = 0.0;
  for (const auto& [e, d] : system.targets()) mean_target += d;
  mean_target /= static_cast<double>(system.graph().edges().size());

  // position s[v-1] per agent; slot(v) = place of agent v in the ordering
  std::vector<int> slot(n);
  for (int k = 0; k < n; ++k) slot[ordering[k] - 1] = k;

  auto balance = [&](const std::vector<double>& s, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < system.graph().edges().size(); ++k) {
      const Edge& e = system.graph().edges()[k];
      const double gap = s[e.second - 1] - s[e.first - 1];
      const double d = std::abs(gap);
      if (!(d > 0.0)) throw std::domain_error("coincident agents on the line");
      const double pull = system.law(static_cast<int>(k)).f(d) * gap;
      out[e.first - 1] += pull;
      out[e.second - 1] -= pull;
    }
  };

  auto ordered = [&](const std::vector<double>& s) {
    for (int k = 1; k < n; ++k)
      if (!(s[ordering[k] - 1] > s[ordering[k - 1] - 1])) return false;
    return true;
  };

  const int pinned = ordering[0] - 1;
  std::vector<EquilibriumRecord> found;
  auto already_found = [&](const std::vector<double>& s) {
    for (const auto& rec : found) {
      double max_gap_diff = 0.0;
      for (int k = 1; k < n; ++k) {
        const double gap_new = s[ordering[k] - 1] - s[ordering[k - 1] - 1];
        const double gap_old = rec.configuration.at(ordering[k]).x() -
                               rec.configuration.at(ordering[k - 1]).x();
        max_gap_diff = std::max(max_gap_diff, std::abs(gap_new - gap_old));
      }
      if (max_gap_diff < 1e-7) return true;
    }
    return false;
  };

  const double spacings[] = {0.35, 0.5, 0.7, 1.0, 1.4, 2.0};
  for (double scale : spacings) {
    std::vector<double> s(n);
    for (int k = 0; k < n; ++k)
      s[ordering[k] - 1] = static_cast<double>(k) * scale * mean_target;

    std::vector<double> f(n), ftrial(n);
    bool converged = false;
    try {
      balance(s, f);
      for (int iter = 0; iter < 120; ++iter) {
        double fnorm = 0.0;
        for (int v = 0; v < n; ++v)
          if (v != pinned) fnorm = std::max(fnorm, std::abs(f[v]));
        if (fnorm < 1e-12) {
          converged = true;
          break;
        }

        // Newton system on the free agents; the Jacobian is the A-matrix.
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n - 1, n - 1);
        Eigen::VectorXd rhs(n - 1);
        std::vector<int> col(n, -1);
        int c = 0;
        for (int v = 0; v < n; ++v)
          if (v != pinned) col[v] = c++;
        for (std::size_t k = 0; k < system.graph().edges().size(); ++k) {
          const Edge& e = system.graph().edges()[k];
          const int i = e.first - 1, j = e.second - 1;
          const double d = std::abs(s[j] - s[i]);
          const double aij = system.law(static_cast<int>(k)).xf_prime(d);
          if (col[i] >= 0) jac(col[i], col[i]) -= aij;
          if (col[j] >= 0) jac(col[j], col[j]) -= aij;
          if (col[i] >= 0 && col[j] >= 0) {
            jac(col[i], col[j]) += aij;
            jac(col[j], col[i]) += aij;
          }
        }
        for (int v = 0; v < n; ++v)
          if (col[v] >= 0) rhs[col[v]] = -f[v];
        const Eigen::VectorXd delta = jac.fullPivLu().solve(rhs);
        if (!delta.allFinite()) break;

        double lambda = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt, lambda *= 0.5) {
          std::vector<double> st = s;
          for (int v = 0; v < n; ++v)
            if (col[v] >= 0) st[v] += lambda * delta[col[v]];
          if (!ordered(st)) continue;
          try {
            balance(st, ftrial);
          } catch (const std::domain_error&) {
            continue;
          }
          double tnorm = 0.0;
          for (int v = 0; v < n; ++v)
            if (v != pinned) tnorm = std::max(tnorm, std::abs(ftrial[v]));
          if (tnorm < fnorm) {
            s = st;
            f = ftrial;
            accepted = true;
            break;
          }
        }
        if (!accepted) break;
      }
    } catch (const std::domain_error&) {
      continue;
    }

    if (!converged || !ordered(s) || already_found(s)) continue;
    Configuration cfg;
    cfg.points.resize(n);
    for (int v = 0; v < n; ++v) cfg.points[v] = Vec2(s[v], 0.0);
    found.push_back({cfg, gradient_inf_norm(system, cfg), "line-newton", true});
  }
  return found;
}

std::vector<std::vector<int>> line_orderings(int agent_count) {
  std::vector<int> perm(agent_count);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    if (perm.front() < perm.back()) out.push_back(perm);  // skip reversals
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace triform
