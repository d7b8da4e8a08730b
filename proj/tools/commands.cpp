#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "triform/analysis.hpp"
#include "triform/formats.hpp"
#include "triform/scenario.hpp"
#include "triform/version.hpp"

namespace triform::cli {

using nlohmann::json;

namespace {

struct LoadedScenario {
  Scenario scenario;
  FormationSystem system;
};

// Loads and materializes the scenario; parse failures exit with kExitUsage,
// semantic failures with kExitCheckFailure.
std::optional<LoadedScenario> load(const CommonOptions& opts, int& exit_code) {
  if (opts.scenario.empty()) {
    std::cerr << "error: --scenario is required\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  Scenario scenario;
  try {
    scenario = load_scenario(opts.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  if (opts.seed) scenario.seed = *opts.seed;
  if (opts.tol) scenario.controls.equilibrium_tol = *opts.tol;
  try {
    FormationSystem system = make_system(scenario);
    return LoadedScenario{std::move(scenario), std::move(system)};
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    exit_code = kExitCheckFailure;
    return std::nullopt;
  }
}

json signature_json(const Signature& s) {
  return json{{"n_plus", s.n_plus},
              {"n_minus", s.n_minus},
              {"n_zero", s.n_zero},
              {"zero_tol", s.zero_tol}};
}

std::string signature_str(const Signature& s) {
  std::ostringstream out;
  out << "(" << s.n_plus << ", " << s.n_minus << ", " << s.n_zero << ")";
  return out.str();
}

json configuration_json(const Configuration& p) {
  json coords = json::array();
  for (const Vec2& x : p.points) coords.push_back({x.x(), x.y()});
  return coords;
}

void emit_rows(const std::string& section,
               const std::vector<std::pair<std::string, std::string>>& rows) {
  for (const auto& [key, value] : rows)
    std::cout << section << "," << key << "," << value << "\n";
}

RunManifest make_manifest(const std::string& command, const Scenario& scenario,
                          const std::vector<std::string>& outputs) {
  RunManifest manifest;
  manifest.command = command;
  manifest.scenario_digest = scenario_digest(scenario);
  manifest.seed = scenario.seed;
  manifest.version = kVersion;
  manifest.outputs = outputs;
  return manifest;
}

Configuration sample_initial(const FormationSystem& system, std::uint64_t seed) {
  double max_target = 0.0;
  for (const auto& [e, d] : system.targets()) max_target = std::max(max_target, d);
  const double half = 2.0 * max_target;
  RngStream rng = RngStream::substream(seed, 0);
  Configuration p;
  p.points.resize(system.agent_count());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (auto& x : p.points)
      x = Vec2(rng.uniform(-half, half), rng.uniform(-half, half));
    bool ok = true;
    for (const Edge& e : system.graph().edges())
      ok = ok && (p.at(e.first) - p.at(e.second)).norm() >= 1e-3;
    if (ok) return p;
  }
  throw std::runtime_error("could not sample an initial configuration");
}

struct LineSearchResult {
  std::vector<EquilibriumRecord> records;
  std::vector<std::vector<int>> orderings;
};

LineSearchResult search_line_equilibria(const FormationSystem& system) {
  LineSearchResult result;
  for (const auto& ordering : line_orderings(system.agent_count())) {
    for (EquilibriumRecord& rec : find_line_equilibria(system, ordering)) {
      bool duplicate = false;
      for (const EquilibriumRecord& seen : result.records)
        if (seen.configuration.size() == rec.configuration.size() &&
            orbit_distance(seen.configuration, rec.configuration) < 1e-7) {
          duplicate = true;
          break;
        }
      if (!duplicate) {
        result.records.push_back(std::move(rec));
        result.orderings.push_back(ordering);
      }
    }
  }
  return result;
}

}  // namespace

int run_generate(int n, std::uint64_t seed, const std::filesystem::path& out) {
  if (n < 2) {
    std::cerr << "error: N must be at least 2\n";
    return kExitUsage;
  }
  RngStream rng(seed);
  const TriangulatedLamanGraph graph = build_graph(random_steps(n, rng));
  write_graph_file(out, graph);
  std::cout << "wrote " << out.string() << " (N=" << n << ", |E|="
            << graph.edges().size() << ")\n";
  return kExitOk;
}

int run_validate(const CommonOptions& opts) {
  if (opts.scenario.empty()) {
    std::cerr << "error: --scenario is required\n";
    return kExitUsage;
  }
  Scenario scenario;
  try {
    scenario = load_scenario(opts.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const ScenarioValidation v = validate_scenario(scenario);
  if (opts.format == "rows") {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("graph_ok", v.graph_ok ? "1" : "0");
    rows.emplace_back("targets_ok", v.targets_ok ? "1" : "0");
    rows.emplace_back("laws_ok", v.laws_ok ? "1" : "0");
    emit_rows("validate", rows);
  } else {
    for (const std::string& m : v.messages) std::cout << m << "\n";
    std::cout << (v.ok() ? "scenario valid" : "scenario INVALID") << "\n";
  }
  return v.ok() ? kExitOk : kExitCheckFailure;
}

int run_simulate(const CommonOptions& opts,
                 const std::optional<std::filesystem::path>& p0_path) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;
  const FormationSystem& system = loaded->system;
  const Scenario& scenario = loaded->scenario;

  Configuration p0;
  if (p0_path) {
    try {
      p0 = read_configuration(*p0_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    if (p0.size() != system.agent_count()) {
      std::cerr << "error: initial configuration has " << p0.size()
                << " agents, scenario needs " << system.agent_count() << "\n";
      return kExitCheckFailure;
    }
    if (!in_configuration_space(system.graph(), p0)) {
      std::cerr << "error: initial configuration outside P_G (coincident "
                   "adjacent agents)\n";
      return kExitCheckFailure;
    }
  } else {
    p0 = sample_initial(system, scenario.seed);
  }

  const Trajectory traj =
      integrate(system, p0, scenario.horizon, scenario.controls);
  const auto traj_path = opts.out_dir / "trajectory.csv";
  write_trajectory(traj_path, traj);

  std::vector<std::string> outputs = {traj_path.string()};
  if (traj.failed) {
    write_manifest(opts.out_dir / "manifest.json",
                   make_manifest("simulate", scenario, outputs));
    std::cerr << "integration failed: " << traj.failure
              << " (partial trajectory retained)\n";
    return kExitNumerical;
  }

  EquilibriumRecord rec{traj.final_configuration(),
                        traj.gradient_norms.back(), "integrator", false};
  if (traj.reached_equilibrium)
    rec = refine_equilibrium(system, traj.final_configuration());

  const auto final_path = opts.out_dir / "final_state.txt";
  write_configuration(final_path, rec.configuration);
  outputs.push_back(final_path.string());

  // plot data: per-edge distance error against time
  {
    std::ostringstream plot;
    plot << "t";
    for (const Edge& e : system.graph().edges())
      plot << ",err_" << e.first << "_" << e.second;
    plot << "\n";
    const TargetDistances targets = system.targets();
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      plot << format_double(traj.times[k]);
      for (const Edge& e : system.graph().edges()) {
        const double d = (traj.snapshots[k].at(e.first) -
                          traj.snapshots[k].at(e.second)).norm();
        plot << "," << format_double(std::abs(d - targets.at(e)));
      }
      plot << "\n";
    }
    const auto plot_path = opts.out_dir / "distance_errors.csv";
    write_text_file(plot_path, plot.str());
    outputs.push_back(plot_path.string());
  }

  json eq{{"residual", rec.residual},
          {"method", rec.method},
          {"refined", rec.refined},
          {"reached_equilibrium", traj.reached_equilibrium},
          {"configuration", configuration_json(rec.configuration)}};
  const auto eq_path = opts.out_dir / "equilibrium.json";
  write_text_file(eq_path, eq.dump(2) + "\n");
  outputs.push_back(eq_path.string());
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("simulate", scenario, outputs));

  if (opts.format == "rows") {
    emit_rows("simulate",
              {{"steps", std::to_string(traj.times.size())},
               {"final_time", format_double(traj.times.back())},
               {"residual", format_double(rec.residual)},
               {"reached_equilibrium", traj.reached_equilibrium ? "1" : "0"}});
  } else {
    std::cout << "trajectory: " << traj.times.size() << " snapshots, t_end="
              << traj.times.back() << "\n";
    std::cout << "final residual " << rec.residual << " (" << rec.method
              << ")\n";
    double max_err = 0.0;
    for (const auto& [e, dbar] : system.targets()) {
      const double d =
          (rec.configuration.at(e.first) - rec.configuration.at(e.second)).norm();
      max_err = std::max(max_err, std::abs(d - dbar));
    }
    std::cout << "max |d_ij - dbar_ij| = " << max_err << "\n";
  }
  return kExitOk;
}

int run_equilibria(const CommonOptions& opts) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;
  const FormationSystem& system = loaded->system;

  if (system.agent_count() > 7) {
    std::cerr << "error: line-equilibrium enumeration supports N <= 7\n";
    return kExitUsage;
  }
  const LineSearchResult found = search_line_equilibria(system);

  json entries = json::array();
  for (std::size_t i = 0; i < found.records.size(); ++i) {
    const EquilibriumRecord& rec = found.records[i];
    const OrbitClassification cls = classify_orbit(system, rec.configuration);
    entries.push_back({{"ordering", found.orderings[i]},
                       {"residual", rec.residual},
                       {"signature", signature_json(cls.signature)},
                       {"class", to_string(cls.verdict)},
                       {"configuration", configuration_json(rec.configuration)}});
    if (opts.format == "rows") {
      std::ostringstream word;
      for (int v : found.orderings[i]) word << v;
      emit_rows("equilibria", {{word.str(), signature_str(cls.signature)}});
    } else {
      std::cout << "line equilibrium #" << i << ": residual " << rec.residual
                << ", signature " << signature_str(cls.signature) << ", "
                << to_string(cls.verdict) << "\n";
    }
  }
  if (opts.format != "rows")
    std::cout << found.records.size() << " distinct line equilibria\n";

  const auto out_path = opts.out_dir / "equilibria.json";
  write_text_file(out_path, json{{"equilibria", entries}}.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("equilibria", loaded->scenario,
                               {out_path.string()}));
  return kExitOk;
}

int run_partition(const CommonOptions& opts, const std::filesystem::path& config) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;

  Configuration p;
  try {
    p = read_configuration(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (p.size() != loaded->system.agent_count()) {
    std::cerr << "error: configuration size mismatch\n";
    return kExitCheckFailure;
  }

  const IndependentPartition partition = independent_partition(
      loaded->system.graph(), p, loaded->scenario.tolerances.collinearity);

  json blocks = json::array();
  for (const PartitionBlock& block : partition.blocks) {
    json edges = json::array();
    for (const Edge& e : block.edges) edges.push_back({e.first, e.second});
    blocks.push_back(
        {{"edges", edges},
         {"vertices", block.vertices},
         {"line_direction", {block.line_direction.x(), block.line_direction.y()}}});
  }
  const json report{{"blocks", blocks},
                    {"fragile", partition.fragile()},
                    {"fragile_steps", partition.fragile_steps}};
  const auto out_path = opts.out_dir / "partition.json";
  write_text_file(out_path, report.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("partition", loaded->scenario,
                               {out_path.string()}));

  if (opts.format == "rows") {
    for (std::size_t i = 0; i < partition.blocks.size(); ++i) {
      std::ostringstream edges;
      for (const Edge& e : partition.blocks[i].edges)
        edges << "(" << e.first << "-" << e.second << ")";
      emit_rows("partition", {{std::to_string(i), edges.str()}});
    }
  } else {
    std::cout << partition.blocks.size() << " blocks"
              << (partition.fragile() ? " (partition-fragile)" : "") << "\n";
    for (std::size_t i = 0; i < partition.blocks.size(); ++i) {
      std::cout << "  block " << i << ":";
      for (const Edge& e : partition.blocks[i].edges)
        std::cout << " (" << e.first << "," << e.second << ")";
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int run_spectrum(const CommonOptions& opts, const std::filesystem::path& config) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;
  const FormationSystem& system = loaded->system;

  Configuration p;
  try {
    p = read_configuration(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (p.size() != system.agent_count()) {
    std::cerr << "error: configuration size mismatch\n";
    return kExitCheckFailure;
  }

  const double tol = loaded->scenario.controls.equilibrium_tol;
  double residual = gradient_inf_norm(system, p);
  if (residual > tol) {
    const EquilibriumRecord rec = refine_equilibrium(system, p);
    if (!rec.refined) {
      std::cerr << "error: input is not an equilibrium and refinement "
                   "diverged (residual "
                << residual << ")\n";
      return kExitNumerical;
    }
    p = rec.configuration;
    residual = rec.residual;
  }

  const OrbitClassification cls = classify_orbit(system, p);
  IndexFormulaReport index;
  bool index_available = true;
  try {
    index = verify_morse_bott(system, p, loaded->scenario.tolerances.collinearity,
                              std::max(residual * 10.0, 1e-8));
  } catch (const std::exception&) {
    index_available = false;
  }

  json blocks = json::array();
  if (index_available) {
    for (const BlockSignatureReport& b : index.blocks) {
      json edges = json::array();
      for (const Edge& e : b.edges) edges.push_back({e.first, e.second});
      blocks.push_back({{"edges", edges},
                        {"signature", signature_json(b.signature)},
                        {"degenerate", b.degenerate}});
    }
  }
  std::vector<double> eigs(cls.eigenvalues.data(),
                           cls.eigenvalues.data() + cls.eigenvalues.size());
  const json report{{"residual", residual},
                    {"class", to_string(cls.verdict)},
                    {"signature", signature_json(cls.signature)},
                    {"eigenvalues", eigs},
                    {"index_formula",
                     index_available
                         ? json{{"conclusive", index.conclusive},
                                {"minus_ok", index.minus_ok},
                                {"plus_ok", index.plus_ok},
                                {"blocks", blocks}}
                         : json()}};
  const auto out_path = opts.out_dir / "spectrum.json";
  write_text_file(out_path, report.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("spectrum", loaded->scenario,
                               {out_path.string()}));

  if (opts.format == "rows") {
    emit_rows("spectrum", {{"class", to_string(cls.verdict)},
                           {"signature", signature_str(cls.signature)},
                           {"residual", format_double(residual)}});
  } else {
    std::cout << to_string(cls.verdict) << ", signature "
              << signature_str(cls.signature) << ", residual " << residual
              << "\n";
    if (index_available)
      std::cout << "index formula: "
                << (index.pass() ? "holds"
                                 : (index.conclusive ? "VIOLATED" : "inconclusive"))
                << " over " << index.blocks.size() << " blocks\n";
  }

  if (cls.verdict == OrbitClass::degenerate ||
      (index_available && !index.conclusive))
    return kExitNumerical;
  if (index_available && !index.pass()) return kExitCheckFailure;
  return kExitOk;
}

int run_enumerate(const CommonOptions& opts) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;

  TargetOrbitCatalog catalog;
  try {
    catalog = enumerate_target_orbits(loaded->system.graph(),
                                      loaded->system.targets());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }

  json entries = json::array();
  for (int i = 0; i < catalog.count(); ++i)
    entries.push_back({{"sign_word", catalog.sign_words[i]},
                       {"configuration", configuration_json(catalog.entries[i])}});
  const json report{{"count", catalog.count()},
                    {"expected", catalog.expected_count},
                    {"min_pairwise_distance", catalog.min_pairwise_distance},
                    {"entries", entries}};
  const auto out_path = opts.out_dir / "catalog.json";
  write_text_file(out_path, report.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("enumerate", loaded->scenario,
                               {out_path.string()}));

  if (opts.format == "rows") {
    emit_rows("enumerate",
              {{"count", std::to_string(catalog.count())},
               {"expected", std::to_string(catalog.expected_count)},
               {"min_pairwise_distance",
                format_double(catalog.min_pairwise_distance)}});
  } else {
    std::cout << "catalog: " << catalog.count() << " orbits (expected "
              << catalog.expected_count << "), min pairwise orbit distance "
              << catalog.min_pairwise_distance << "\n";
  }
  return catalog.count() == catalog.expected_count ? kExitOk : kExitCheckFailure;
}

int run_basin(const CommonOptions& opts) {
  int exit_code = kExitOk;
  auto loaded = load(opts, exit_code);
  if (!loaded) return exit_code;

  const int trials = opts.trials.value_or(200);
  if (trials < 1) {
    std::cerr << "error: --trials must be at least 1\n";
    return kExitUsage;
  }
  BasinOptions options;
  options.controls = loaded->scenario.controls;
  options.horizon = loaded->scenario.horizon;
  options.orbit_match_tol = loaded->scenario.tolerances.orbit_match;

  const BasinReport report =
      basin_monte_carlo(loaded->system, trials, options, loaded->scenario.seed);

  json hits = json::array();
  for (int h : report.orbit_hits) hits.push_back(h);
  const json doc{{"trials", report.trials},
                 {"seed", report.seed},
                 {"orbit_hits", hits},
                 {"non_target", report.non_target},
                 {"failures", report.failures},
                 {"target_fraction", report.target_fraction()},
                 {"max_target_distance_error", report.max_target_distance_error}};
  const auto out_path = opts.out_dir / "basin.json";
  write_text_file(out_path, doc.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("basin", loaded->scenario, {out_path.string()}));

  if (opts.format == "rows") {
    emit_rows("basin",
              {{"trials", std::to_string(report.trials)},
               {"target", std::to_string(report.target_total())},
               {"non_target", std::to_string(report.non_target)},
               {"failures", std::to_string(report.failures)}});
  } else {
    std::cout << "basin: " << report.target_total() << "/" << report.trials
              << " to target orbits, " << report.non_target << " non-target, "
              << report.failures << " failures\n";
    std::cout << "max |d_ij - dbar_ij| over target endpoints: "
              << report.max_target_distance_error << "\n";
  }
  return kExitOk;
}

int run_verify(const CommonOptions& opts, double min_target_fraction) {
  if (opts.scenario.empty()) {
    std::cerr << "error: --scenario is required\n";
    return kExitUsage;
  }
  Scenario scenario;
  try {
    scenario = load_scenario(opts.scenario);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (opts.seed) scenario.seed = *opts.seed;
  if (opts.tol) scenario.controls.equilibrium_tol = *opts.tol;
  const int n = scenario.graph.vertex_count();

  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Check> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  };

  // 1. scenario validation
  const ScenarioValidation validation = validate_scenario(scenario);
  {
    std::string detail;
    for (const std::string& m : validation.messages) {
      if (!detail.empty()) detail += "; ";
      detail += m;
    }
    add("validate", validation.ok(), detail);
  }

  TargetOrbitCatalog catalog;
  if (validation.ok()) {
    const FormationSystem system = make_system(scenario);
    // 2. catalog count
    catalog = enumerate_target_orbits(system.graph(), system.targets());
    std::ostringstream detail;
    detail << catalog.count() << " orbits, expected " << catalog.expected_count
           << ", min pairwise distance " << catalog.min_pairwise_distance;
    add("catalog",
        catalog.count() == catalog.expected_count &&
            (catalog.count() < 2 || catalog.min_pairwise_distance > 1e-3),
        detail.str());

    // 3. census of the catalog: every entry strongly rigid and stable with
    //    the full complement of negative eigenvalues
    std::vector<EquilibriumRecord> catalog_records;
    for (int i = 0; i < catalog.count(); ++i)
      catalog_records.push_back(refine_equilibrium(system, catalog.entries[i]));
    const StabilityCensus target_census = stability_census(
        system, catalog_records, scenario.tolerances.collinearity);
    bool stable_ok = target_census.stable_strong == catalog.count();
    for (const CensusRow& row : target_census.rows)
      stable_ok = stable_ok && row.signature == Signature{0, 2 * n - 3, 3};
    {
      std::ostringstream detail;
      detail << target_census.stable_strong << "/" << catalog.count()
             << " catalog orbits strongly rigid and stable with signature (0, "
             << 2 * n - 3 << ", 3)";
      add("target-stability", stable_ok, detail.str());
    }

    // 4. census of the line equilibria: all unstable, none strongly rigid
    LineSearchResult lines;
    if (n >= 3 && n <= 7) lines = search_line_equilibria(system);
    const StabilityCensus line_census =
        stability_census(system, lines.records, scenario.tolerances.collinearity);
    bool lines_ok = line_census.stability_matches_rigidity() &&
                    line_census.stable_strong == 0 &&
                    line_census.stable_not_strong == 0;
    int nondegenerate = 0;
    for (const CensusRow& row : line_census.rows) {
      if (row.verdict == OrbitClass::degenerate) continue;
      ++nondegenerate;
      lines_ok = lines_ok && row.signature.n_plus >= 1;
    }
    {
      std::ostringstream detail;
      if (n > 7)
        detail << "ordering enumeration skipped (N > 7)";
      else
        detail << lines.records.size() << " line equilibria, " << nondegenerate
               << " nondegenerate (all co-index >= 1: "
               << (lines_ok ? "yes" : "NO") << "), " << line_census.degenerate
               << " degenerate";
      add("line-instability", n < 3 || n > 7 || lines_ok, detail.str());
    }

    // 5. Morse-Bott index formula on everything found so far
    bool mb_ok = true;
    int mb_checked = 0, mb_inconclusive = 0;
    auto check_mb = [&](const Configuration& p) {
      const IndexFormulaReport report = verify_morse_bott(
          system, p, scenario.tolerances.collinearity, 1e-8);
      if (!report.conclusive) {
        ++mb_inconclusive;
        return;
      }
      ++mb_checked;
      mb_ok = mb_ok && report.minus_ok && report.plus_ok;
    };
    for (const EquilibriumRecord& rec : catalog_records)
      check_mb(rec.configuration);
    for (const EquilibriumRecord& rec : lines.records)
      check_mb(rec.configuration);
    {
      std::ostringstream detail;
      detail << "holds at " << mb_checked << " nondegenerate equilibria ("
             << mb_inconclusive << " inconclusive)";
      add("morse-bott", mb_ok, detail.str());
    }

    // 6. reduction formula at line equilibria of N >= 4
    if (n >= 4) {
      bool red_ok = true;
      int red_checked = 0;
      std::string red_detail;
      for (const EquilibriumRecord& rec : lines.records) {
        const ReductionReport report = verify_reduction_formula(
            system, rec.configuration, 1e-9, 1e-8);
        ++red_checked;
        if (!report.pass(scenario.tolerances.congruence)) {
          red_ok = false;
          if (red_detail.empty())
            red_detail = "congruence offdiag " +
                         format_double(std::max(report.congruence_a_offdiag,
                                                report.congruence_b_offdiag));
        }
      }
      std::ostringstream detail;
      detail << "signature shift and congruence hold at " << red_checked
             << " line equilibria";
      add("reduction", red_ok, red_ok ? detail.str() : red_detail);
    }

    // 7. basin statistics
    const int trials = opts.trials.value_or(200);
    BasinOptions options;
    options.controls = scenario.controls;
    options.horizon = scenario.horizon;
    options.orbit_match_tol = scenario.tolerances.orbit_match;
    const BasinReport basin =
        basin_monte_carlo(system, trials, options, scenario.seed);
    {
      std::ostringstream detail;
      detail << basin.target_total() << "/" << basin.trials
             << " trials reached target orbits (fraction "
             << basin.target_fraction() << ", threshold " << min_target_fraction
             << "), max distance error " << basin.max_target_distance_error;
      add("basin",
          basin.target_fraction() >= min_target_fraction &&
              basin.max_target_distance_error < 1e-5,
          detail.str());
    }
  }

  bool all_ok = true;
  json check_json = json::array();
  for (const Check& c : checks) {
    all_ok = all_ok && c.pass;
    check_json.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (opts.format == "rows")
      std::cout << "verify," << c.name << "," << (c.pass ? "pass" : "fail")
                << "\n";
    else
      std::cout << (c.pass ? "[ ok ] " : "[FAIL] ") << c.name << ": "
                << c.detail << "\n";
  }
  if (opts.format != "rows")
    std::cout << (all_ok ? "VERIFY PASS" : "VERIFY FAIL") << "\n";

  const auto out_path = opts.out_dir / "verify.json";
  write_text_file(out_path,
                  json{{"pass", all_ok}, {"checks", check_json}}.dump(2) + "\n");
  write_manifest(opts.out_dir / "manifest.json",
                 make_manifest("verify", scenario, {out_path.string()}));
  return all_ok ? kExitOk : kExitCheckFailure;
}

}  // namespace triform::cli
