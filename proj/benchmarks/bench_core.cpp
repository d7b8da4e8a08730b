#include <benchmark/benchmark.h>

#include "triform/analysis.hpp"

using namespace triform;

namespace {

FormationSystem eight_agent_system() {
  RngStream rng(7);
  const auto graph = build_graph(random_steps(8, rng));
  return FormationSystem::uniform(graph, "standard", 1.0);
}

Configuration random_p(int n, std::uint64_t seed) {
  RngStream rng(seed);
  Configuration p;
  p.points.resize(n);
  for (auto& x : p.points)
    x = Vec2(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
  return p;
}

void BM_VectorField(benchmark::State& state) {
  const FormationSystem sys = eight_agent_system();
  const Configuration p = random_p(8, 21);
  for (auto _ : state) benchmark::DoNotOptimize(vector_field_flat(sys, p));
}
BENCHMARK(BM_VectorField);

void BM_HessianAssembly(benchmark::State& state) {
  const FormationSystem sys = eight_agent_system();
  const Configuration p = random_p(8, 22);
  for (auto _ : state) benchmark::DoNotOptimize(hessian(sys, p));
}
BENCHMARK(BM_HessianAssembly);

void BM_SignatureEigensolve(benchmark::State& state) {
  const FormationSystem sys = eight_agent_system();
  const Eigen::MatrixXd h = hessian(sys, random_p(8, 23));
  for (auto _ : state) benchmark::DoNotOptimize(signature_of(h));
}
BENCHMARK(BM_SignatureEigensolve);

void BM_IntegrateTriangle(benchmark::State& state) {
  const FormationSystem sys =
      FormationSystem::uniform(build_graph({{3, {1, 2}}}), "standard", 1.0);
  IntegratorControls controls;
  controls.sample_interval = 1e9;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const Configuration p0 = random_p(3, 100 + seed++);
    benchmark::DoNotOptimize(integrate(sys, p0, 2000.0, controls));
  }
}
BENCHMARK(BM_IntegrateTriangle);

void BM_RefineEquilibrium(benchmark::State& state) {
  const FormationSystem sys =
      FormationSystem::uniform(build_graph({{3, {1, 2}}}), "standard", 1.0);
  Configuration p;
  p.points = {Vec2(0.0, 0.0), Vec2(1.0 + 1e-5, 1e-5),
              Vec2(0.5, std::sqrt(3.0) / 2.0 - 1e-5)};
  for (auto _ : state) benchmark::DoNotOptimize(refine_equilibrium(sys, p));
}
BENCHMARK(BM_RefineEquilibrium);

void BM_IndependentPartition(benchmark::State& state) {
  RngStream rng(55);
  const auto graph = build_graph(random_steps(8, rng));
  Configuration p;
  p.points = {Vec2(0.0, 0.0), Vec2(1.0, 0.0)};
  for (const HennebergStep& step : graph.steps()) {
    const Vec2 a = p.at(step.parent.first), b = p.at(step.parent.second);
    if (rng.next_double() < 0.5)
      p.points.push_back(a + 1.5 * (b - a));
    else
      p.points.push_back(a + Vec2(0.3, 0.8));
  }
  for (auto _ : state) benchmark::DoNotOptimize(independent_partition(graph, p));
}
BENCHMARK(BM_IndependentPartition);

void BM_EnumerateCatalog(benchmark::State& state) {
  RngStream rng(77);
  const auto graph = build_graph(random_steps(8, rng));
  const FormationSystem sys = FormationSystem::uniform(graph, "standard", 1.0);
  const TargetDistances targets = sys.targets();
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_target_orbits(graph, targets));
}
BENCHMARK(BM_EnumerateCatalog);

void BM_OrbitDistance(benchmark::State& state) {
  const Configuration p = random_p(8, 31);
  const Configuration q = random_p(8, 32);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_distance(p, q));
}
BENCHMARK(BM_OrbitDistance);

}  // namespace

BENCHMARK_MAIN();
