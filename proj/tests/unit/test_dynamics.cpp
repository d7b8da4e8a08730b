#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "triform/dynamics.hpp"

using namespace triform;
using triform::testing::fd_gradient;
using triform::testing::random_configuration;
using triform::testing::random_se2;
using triform::testing::simpson_oracle;

namespace {

Configuration config(std::initializer_list<std::pair<double, double>> pts) {
  Configuration p;
  for (const auto& [x, y] : pts) p.points.emplace_back(x, y);
  return p;
}

FormationSystem unit_triangle() {
  return FormationSystem::uniform(build_graph({{3, {1, 2}}}), "standard", 1.0);
}

FormationSystem unit_pair() {
  return FormationSystem::uniform(build_graph({}), "standard", 1.0);
}

const Configuration kEquilateral =
    config({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});

// collinear triangle saddle: center agent 1, gaps 1/sqrt(2)
const double kSaddleGap = 1.0 / std::sqrt(2.0);
const Configuration kSaddle =
    config({{0.0, 0.0}, {-kSaddleGap, 0.0}, {kSaddleGap, 0.0}});

}  // namespace

TEST_CASE("system construction validates law coverage and targets") {
  const auto triangle = build_graph({{3, {1, 2}}});
  CHECK_THROWS_AS(
      FormationSystem::create(triangle, {standard_law(1.0), standard_law(1.0)}),
      std::invalid_argument);
  // targets 1, 1, 3 violate the strict triangle inequality
  CHECK_THROWS_AS(
      FormationSystem::create(
          triangle, {standard_law(1.0), standard_law(1.0), standard_law(3.0)}),
      std::invalid_argument);
}

TEST_CASE("potential values") {
  const FormationSystem sys = unit_triangle();
  CHECK(potential(sys, kEquilateral) == doctest::Approx(0.0).epsilon(1e-14));

  const FormationSystem pair = unit_pair();
  const double oracle = simpson_oracle(
      [](double t) { return t * (t * t - 1.0) / (t * t); }, 1.0, 2.0);
  CHECK(potential(pair, config({{0.0, 0.0}, {2.0, 0.0}})) ==
        doctest::Approx(oracle).epsilon(1e-9));

  CHECK_THROWS_AS(potential(pair, config({{1.0, 1.0}, {1.0, 1.0}})),
                  std::domain_error);
}

TEST_CASE("potential is SE(2)-invariant") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration p = random_configuration(3, rng);
    const Configuration q = se2_apply(random_se2(rng), p);
    CHECK(potential(sys, p) ==
          doctest::Approx(potential(sys, q)).epsilon(1e-10));
  }
}

TEST_CASE("vector field point values") {
  const FormationSystem pair = unit_pair();
  const auto field = vector_field(pair, config({{0.0, 0.0}, {2.0, 0.0}}));
  CHECK(field[0].x() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(field[0].y() == doctest::Approx(0.0));
  CHECK(field[1].x() == doctest::Approx(-1.5).epsilon(1e-15));

  const auto zero = vector_field(unit_triangle(), kEquilateral);
  for (const Vec2& f : zero) CHECK(f.norm() < 1e-14);
}

TEST_CASE("vector field equals minus the finite-difference gradient") {
  const auto g = build_graph({{3, {1, 2}}, {4, {2, 3}}});
  const FormationSystem sys = FormationSystem::uniform(g, "standard", 1.2);
  RngStream rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Configuration p = random_configuration(4, rng, 2.0, 0.3);
    const Eigen::VectorXd field = vector_field_flat(sys, p);
    const Eigen::VectorXd grad = fd_gradient(sys, p);
    const double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
    CHECK((field + grad).cwiseAbs().maxCoeff() / scale < 1e-6);
  }
}

TEST_CASE("vector field is SE(2)-equivariant") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration p = random_configuration(3, rng);
    const SE2Element g = random_se2(rng);
    const auto lhs = vector_field(sys, se2_apply(g, p));
    const auto rhs = vector_field(sys, p);
    const Eigen::Matrix2d rot = g.rotation();
    for (int i = 0; i < 3; ++i)
      CHECK((lhs[i] - rot * rhs[i]).norm() < 1e-12);
  }
}

TEST_CASE("integrate stops immediately at an equilibrium") {
  const Trajectory traj = integrate(unit_triangle(), kEquilateral, 10.0);
  CHECK(traj.reached_equilibrium);
  CHECK(traj.times.size() == 1);
  CHECK_FALSE(traj.failed);
}

TEST_CASE("triangle flow reaches the unit-target orbit") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Configuration p0 = random_configuration(3, rng, 2.0, 0.1);
    const Trajectory traj = integrate(sys, p0, 2000.0);
    REQUIRE_FALSE(traj.failed);
    REQUIRE(traj.reached_equilibrium);
    const Configuration& pf = traj.final_configuration();
    for (const Edge& e : sys.graph().edges()) {
      const double d = (pf.at(e.first) - pf.at(e.second)).norm();
      CHECK(std::abs(d - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("potential decreases along trajectories") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(15);
  const Configuration p0 = random_configuration(3, rng, 2.0, 0.1);
  IntegratorControls controls;
  controls.sample_interval = 0.25;
  const Trajectory traj = integrate(sys, p0, 2000.0, controls);
  REQUIRE(traj.times.size() > 2);
  for (std::size_t k = 0; k + 1 < traj.potentials.size(); ++k) {
    if (traj.gradient_norms[k] > controls.equilibrium_tol)
      CHECK(traj.potentials[k + 1] < traj.potentials[k] + 1e-12);
  }
  // adjacent agents never collide along the way (C2 at work)
  for (const Configuration& snap : traj.snapshots)
    for (const Edge& e : sys.graph().edges())
      CHECK((snap.at(e.first) - snap.at(e.second)).norm() > 1e-6);
}

TEST_CASE("flow is SE(2)-equivariant along trajectories") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(271);
  const Configuration p0 = random_configuration(3, rng, 1.5, 0.2);
  const SE2Element g = random_se2(rng);
  IntegratorControls controls;
  controls.sample_interval = 0.5;
  const Trajectory base = integrate(sys, p0, 50.0, controls);
  const Trajectory moved = integrate(sys, se2_apply(g, p0), 50.0, controls);
  const std::size_t common = std::min(base.times.size(), moved.times.size());
  for (std::size_t k = 0; k < common; ++k) {
    if (std::abs(base.times[k] - moved.times[k]) > 1e-9) continue;
    const Configuration expected = se2_apply(g, base.snapshots[k]);
    for (int i = 0; i < expected.size(); ++i)
      CHECK((expected.points[i] - moved.snapshots[k].points[i]).norm() < 1e-6);
  }
}

TEST_CASE("near-collision underflow is reported with the last valid state") {
  // short-range attractive singular law: collision in finite time
  const InteractionLaw singular("singular", 1.0,
                                [](double d) { return 1.0 / (d * d); },
                                [](double d) { return -2.0 / (d * d * d); });
  const FormationSystem sys =
      FormationSystem::create(build_graph({}), {singular});
  const Trajectory traj =
      integrate(sys, config({{0.0, 0.0}, {1.0, 0.0}}), 10.0);
  CHECK(traj.failed);
  CHECK(traj.failure.find("underflow") != std::string::npos);
  REQUIRE_FALSE(traj.snapshots.empty());
  const Configuration& last = traj.final_configuration();
  CHECK((last.points[0] - last.points[1]).norm() > 0.0);
}

TEST_CASE("refine keeps exact equilibria") {
  const FormationSystem sys = unit_triangle();
  const EquilibriumRecord rec = refine_equilibrium(sys, kEquilateral);
  CHECK(rec.refined);
  CHECK(rec.method == "input");
  CHECK(rec.residual < 1e-14);
  for (int i = 0; i < 3; ++i)
    CHECK((rec.configuration.points[i] - kEquilateral.points[i]).norm() == 0.0);
}

TEST_CASE("refine pulls a perturbed target configuration back to its orbit") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(5);
  Configuration p = kEquilateral;
  for (auto& x : p.points)
    x += Vec2(rng.uniform(-1e-4, 1e-4), rng.uniform(-1e-4, 1e-4));
  const EquilibriumRecord rec = refine_equilibrium(sys, p);
  CHECK(rec.refined);
  CHECK(rec.method == "newton");
  CHECK(rec.residual <= 1e-10);
  CHECK(orbit_distance(rec.configuration, kEquilateral) < 1e-8);
}

TEST_CASE("refine converges onto the collinear saddle") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(6);
  Configuration p = kSaddle;
  for (auto& x : p.points)
    x += Vec2(rng.uniform(-1e-5, 1e-5), rng.uniform(-1e-5, 1e-5));
  const EquilibriumRecord rec = refine_equilibrium(sys, p);
  CHECK(rec.refined);
  CHECK(rec.residual <= 1e-10);
  CHECK(orbit_distance(rec.configuration, kSaddle) < 1e-7);
}

TEST_CASE("refine rejects inputs above the coarse threshold") {
  const FormationSystem sys = unit_triangle();
  CHECK_THROWS_AS(
      refine_equilibrium(sys, config({{0.0, 0.0}, {9.0, 0.0}, {0.0, 9.0}})),
      std::invalid_argument);
}

TEST_CASE("line equilibria of the unit triangle") {
  const FormationSystem sys = unit_triangle();
  // ordering x2 < x1 < x3: agent 1 in the middle
  const auto records = find_line_equilibria(sys, {2, 1, 3});
  REQUIRE(records.size() == 1);
  const Configuration& p = records[0].configuration;
  const double d12 = (p.at(1) - p.at(2)).norm();
  const double d13 = (p.at(1) - p.at(3)).norm();
  const double d23 = (p.at(2) - p.at(3)).norm();
  CHECK(std::abs(d12 - kSaddleGap) < 1e-9);
  CHECK(std::abs(d13 - kSaddleGap) < 1e-9);
  CHECK(std::abs(d23 - std::sqrt(2.0)) < 1e-9);
  CHECK(records[0].residual <= 1e-10);

  // balance products d_ij f(d_ij): equal and negative at the saddle
  const InteractionLaw law = standard_law(1.0);
  const double q12 = d12 * law.f(d12);
  const double q13 = d13 * law.f(d13);
  const double q23 = -d23 * law.f(d23);
  CHECK(q12 == doctest::Approx(q13).epsilon(1e-10));
  CHECK(q12 == doctest::Approx(q23).epsilon(1e-10));
  CHECK(q12 < 0.0);
  CHECK(q13 < 0.0);
  CHECK(q23 < 0.0);
}

TEST_CASE("the pair has a unique line equilibrium at the target gap") {
  const FormationSystem sys =
      FormationSystem::uniform(build_graph({}), "standard", 1.7);
  const auto records = find_line_equilibria(sys, {1, 2});
  REQUIRE(records.size() == 1);
  const double gap =
      (records[0].configuration.at(2) - records[0].configuration.at(1)).norm();
  CHECK(gap == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("line_orderings skips reversals") {
  const auto orderings = line_orderings(3);
  CHECK(orderings.size() == 3);  // 3!/2
  for (const auto& ordering : orderings) CHECK(ordering.front() < ordering.back());
}

TEST_CASE("equilibria stay within a compact region under Monte Carlo") {
  const FormationSystem sys = unit_triangle();
  RngStream rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration p0 = random_configuration(3, rng, 2.0, 0.1);
    const Trajectory traj = integrate(sys, p0, 2000.0);
    REQUIRE(traj.reached_equilibrium);
    for (const Vec2& x : traj.final_configuration().points)
      CHECK(x.norm() < 10.0);
  }
}
