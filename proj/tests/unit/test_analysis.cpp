#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "triform/analysis.hpp"

using namespace triform;
using triform::testing::random_feasible_targets;

namespace {

Configuration config(std::initializer_list<std::pair<double, double>> pts) {
  Configuration p;
  for (const auto& [x, y] : pts) p.points.emplace_back(x, y);
  return p;
}

const std::vector<HennebergStep> kFiveVertexSteps = {
    {3, {1, 2}}, {4, {1, 3}}, {5, {3, 4}}};

const double kGap = 1.0 / std::sqrt(2.0);
const Configuration kEquilateral =
    config({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});
const Configuration kSaddle = config({{0.0, 0.0}, {-kGap, 0.0}, {kGap, 0.0}});
const Configuration kMixedEquilibrium = config({{0.0, 0.0},
                                                {-kGap, 0.0},
                                                {kGap, 0.0},
                                                {kGap, kGap},
                                                {kGap, -kGap}});

FormationSystem unit_triangle() {
  return FormationSystem::uniform(build_graph({{3, {1, 2}}}), "standard", 1.0);
}

FormationSystem from_targets(const TriangulatedLamanGraph& g,
                             const TargetDistances& targets) {
  std::vector<InteractionLaw> laws;
  for (const Edge& e : g.edges()) laws.push_back(standard_law(targets.at(e)));
  return FormationSystem::create(g, std::move(laws));
}

}  // namespace

TEST_CASE("index formula at a strongly rigid target equilibrium") {
  const auto g = build_graph(kFiveVertexSteps);
  RngStream rng(61);
  const FormationSystem sys = from_targets(g, random_feasible_targets(g, rng));
  const TargetOrbitCatalog catalog =
      enumerate_target_orbits(g, sys.targets());
  REQUIRE(catalog.count() > 0);

  const IndexFormulaReport report =
      verify_morse_bott(sys, catalog.entries.front());
  CHECK(report.pass());
  // 2N-3 pair blocks, each contributing one negative eigenvalue
  CHECK(report.blocks.size() == 7);
  for (const BlockSignatureReport& block : report.blocks) {
    CHECK(block.edges.size() == 1);
    CHECK(block.signature == Signature{0, 1, 3});
  }
  CHECK(report.full == Signature{0, 7, 3});
}

TEST_CASE("index formula is trivial at the single-block saddle") {
  const IndexFormulaReport report = verify_morse_bott(unit_triangle(), kSaddle);
  CHECK(report.pass());
  CHECK(report.blocks.size() == 1);
  CHECK(report.full == Signature{1, 2, 3});
}

TEST_CASE("index formula at the mixed five-agent equilibrium") {
  const FormationSystem sys =
      FormationSystem::uniform(build_graph(kFiveVertexSteps), "standard", 1.0);
  CHECK(gradient_inf_norm(sys, kMixedEquilibrium) < 1e-14);

  const IndexFormulaReport report = verify_morse_bott(sys, kMixedEquilibrium);
  CHECK(report.pass());
  REQUIRE(report.blocks.size() == 3);
  // two 3-agent line saddles (1,2,3) and one pair at target (0,1,3)
  int saddle_blocks = 0, pair_blocks = 0;
  for (const BlockSignatureReport& block : report.blocks) {
    if (block.edges.size() == 3) {
      CHECK(block.signature == Signature{1, 2, 3});
      ++saddle_blocks;
    } else {
      CHECK(block.signature == Signature{0, 1, 3});
      ++pair_blocks;
    }
  }
  CHECK(saddle_blocks == 2);
  CHECK(pair_blocks == 1);
  CHECK(report.full == Signature{2, 5, 3});
  CHECK(report.sum_plus == 2);
  CHECK(report.sum_minus == 5);
}

TEST_CASE("orbit degeneracy and stability match their block decompositions") {
  // nondegenerate full orbit iff every sub-orbit nondegenerate; stable full
  // orbit iff every block stable
  const FormationSystem five =
      FormationSystem::uniform(build_graph(kFiveVertexSteps), "standard", 1.0);
  const FormationSystem triangle = unit_triangle();

  struct Case {
    const FormationSystem* system;
    Configuration p;
  };
  std::vector<Case> cases = {{&triangle, kEquilateral},
                             {&triangle, kSaddle},
                             {&five, kMixedEquilibrium}};
  const TargetOrbitCatalog catalog =
      enumerate_target_orbits(five.graph(), five.targets());
  for (const Configuration& entry : catalog.entries)
    cases.push_back({&five, entry});

  for (const Case& c : cases) {
    const IndexFormulaReport report = verify_morse_bott(*c.system, c.p);
    const bool full_nondegenerate = report.full.n_zero == 3;
    bool blocks_nondegenerate = true;
    bool blocks_stable = true;
    for (const BlockSignatureReport& block : report.blocks) {
      blocks_nondegenerate = blocks_nondegenerate && block.signature.n_zero == 3;
      blocks_stable = blocks_stable && block.signature.n_plus == 0 &&
                      block.signature.n_minus ==
                          block.signature.dimension() - 3;
    }
    CHECK(full_nondegenerate == blocks_nondegenerate);
    const bool full_stable =
        report.full.n_plus == 0 &&
        report.full.n_minus == 2 * c.p.size() - 3 && full_nondegenerate;
    CHECK(full_stable == (blocks_stable && blocks_nondegenerate));
  }
}

TEST_CASE("index formula rejects unrefined inputs") {
  RngStream rng(3);
  CHECK_THROWS_AS(
      verify_morse_bott(unit_triangle(),
                        triform::testing::random_configuration(3, rng)),
      std::invalid_argument);
}

TEST_CASE("sgn triple") {
  CHECK(sgn_triple(5.0) == std::array<int, 3>{1, 0, 0});
  CHECK(sgn_triple(-2.0) == std::array<int, 3>{0, 1, 0});
  CHECK(sgn_triple(0.0) == std::array<int, 3>{0, 0, 1});
  CHECK(sgn_triple(1e-12, 1e-9) == std::array<int, 3>{0, 0, 1});
}

TEST_CASE("reduction formula at four-agent line equilibria") {
  const auto g = build_graph({{3, {1, 2}}, {4, {2, 3}}});
  const FormationSystem sys = FormationSystem::uniform(g, "standard", 1.0);

  int checked = 0;
  for (const auto& ordering : line_orderings(4)) {
    for (const EquilibriumRecord& rec : find_line_equilibria(sys, ordering)) {
      const ReductionReport report =
          verify_reduction_formula(sys, rec.configuration);
      ++checked;
      CHECK(report.pass(1e-7));
      CHECK(report.g_consistency < 1e-10);
      CHECK(report.alpha_identity_residual < 1e-8);
      CHECK(report.beta_identity_residual < 1e-8);
      CHECK(report.reduced_residual < 1e-9);
    }
  }
  CHECK(checked >= 3);
}

TEST_CASE("reduction formula covers the apex-outside case") {
  const auto g = build_graph({{3, {1, 2}}, {4, {2, 3}}});
  const FormationSystem sys = FormationSystem::uniform(g, "standard", 1.0);
  int between = 0, outside = 0;
  for (const auto& ordering : line_orderings(4)) {
    for (const EquilibriumRecord& rec : find_line_equilibria(sys, ordering)) {
      const ReductionReport report =
          verify_reduction_formula(sys, rec.configuration);
      (report.vertex_between ? between : outside) += 1;
      CHECK(report.signatures_ok());
    }
  }
  CHECK(between >= 1);
  CHECK(outside >= 1);
}

TEST_CASE("reduction formula needs at least four agents") {
  CHECK_THROWS_AS(verify_reduction_formula(unit_triangle(), kSaddle),
                  std::invalid_argument);
}

TEST_CASE("catalog enumeration counts") {
  // N=2: a single orbit
  const auto pair = build_graph({});
  const TargetOrbitCatalog c2 =
      enumerate_target_orbits(pair, {{{1, 2}, 1.5}});
  CHECK(c2.count() == 1);
  CHECK(c2.expected_count == 1);

  // triangle: the two mirror orientations
  const auto triangle = build_graph({{3, {1, 2}}});
  const TargetDistances unit = {{{1, 2}, 1.0}, {{1, 3}, 1.0}, {{2, 3}, 1.0}};
  const TargetOrbitCatalog c3 = enumerate_target_orbits(triangle, unit);
  CHECK(c3.count() == 2);
  CHECK(c3.min_pairwise_distance > 0.3);
  // every entry realizes the targets exactly
  for (const Configuration& entry : c3.entries)
    for (const auto& [e, dbar] : unit)
      CHECK((entry.at(e.first) - entry.at(e.second)).norm() ==
            doctest::Approx(dbar).epsilon(1e-12));

  // five-vertex graph with generic targets: 8 pairwise-distinct orbits
  const auto g5 = build_graph(kFiveVertexSteps);
  RngStream rng(1234);
  const TargetOrbitCatalog c5 =
      enumerate_target_orbits(g5, random_feasible_targets(g5, rng));
  CHECK(c5.count() == 8);
  CHECK(c5.expected_count == 8);
  CHECK(c5.min_pairwise_distance > 1e-3);
  for (int i = 0; i < c5.count(); ++i)
    for (int j = i + 1; j < c5.count(); ++j)
      CHECK(orbit_distance(c5.entries[i], c5.entries[j]) > 1e-3);
}

TEST_CASE("catalog rejects invalid targets") {
  const auto triangle = build_graph({{3, {1, 2}}});
  CHECK_THROWS_AS(
      enumerate_target_orbits(triangle,
                              {{{1, 2}, 1.0}, {{1, 3}, 1.0}, {{2, 3}, 2.0}}),
      std::invalid_argument);
}

TEST_CASE("basin Monte Carlo on the unit triangle") {
  const FormationSystem sys = unit_triangle();
  CHECK_THROWS_AS(basin_monte_carlo(sys, 0, {}, 1), std::invalid_argument);

  BasinOptions options;
  options.keep_equilibria = true;
  const BasinReport report = basin_monte_carlo(sys, 100, options, 2026);
  CHECK(report.trials == 100);
  CHECK(report.target_total() + report.non_target + report.failures == 100);
  CHECK(report.orbit_hits.size() == 2);
  CHECK(report.target_fraction() >= 0.99);
  CHECK(report.max_target_distance_error < 1e-5);
  CHECK(report.equilibria.size() + report.failures ==
        static_cast<std::size_t>(report.trials));

  // determinism given the seed
  BasinOptions plain = options;
  plain.keep_equilibria = false;
  const BasinReport again = basin_monte_carlo(sys, 100, plain, 2026);
  CHECK(again.orbit_hits == report.orbit_hits);
  CHECK(again.non_target == report.non_target);
  CHECK(again.failures == report.failures);
}

TEST_CASE("stability census separates targets from saddles") {
  const FormationSystem sys = unit_triangle();

  std::vector<EquilibriumRecord> equilibria;
  const TargetOrbitCatalog catalog =
      enumerate_target_orbits(sys.graph(), sys.targets());
  for (const Configuration& entry : catalog.entries)
    equilibria.push_back({entry, gradient_inf_norm(sys, entry), "catalog", true});
  for (const auto& ordering : line_orderings(3))
    for (const EquilibriumRecord& rec : find_line_equilibria(sys, ordering))
      equilibria.push_back(rec);

  const StabilityCensus census = stability_census(sys, equilibria);
  CHECK(census.rows.size() == equilibria.size());
  CHECK(census.stable_strong == 2);
  CHECK(census.unstable_not_strong == 3);
  CHECK(census.stability_matches_rigidity());

  CHECK(stability_census(sys, {}).rows.empty());
}
