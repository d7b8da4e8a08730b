#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "triform/dynamics.hpp"
#include "triform/laws.hpp"

namespace triform {

/// Tolerances shared across the analysis pipeline.
struct ToleranceSet {
  double collinearity = 1e-7;
  double rank = 1e-8;
  double orbit_match = 1e-4;
  double congruence = 1e-7;
};

/// Declarative experiment description: graph, per-edge law bindings,
/// integrator controls, tolerances, and the master seed.
struct Scenario {
  TriangulatedLamanGraph graph;
  std::string law_family = "standard";
  double default_target = 1.0;
  std::map<Edge, double> target_overrides;
  IntegratorControls controls;
  double horizon = 2000.0;
  ToleranceSet tolerances;
  std::uint64_t seed = 1;
  /// Canonical serialized form, the digest input.
  nlohmann::json document;
};

Scenario parse_scenario(const nlohmann::json& doc,
                        const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Per-edge targets after applying overrides to the default.
TargetDistances scenario_targets(const Scenario& scenario);

/// Builds the validated FormationSystem (throws when the graph, targets, or
/// law checks fail).
FormationSystem make_system(const Scenario& scenario);

struct ScenarioValidation {
  bool graph_ok = false;
  bool targets_ok = false;
  bool laws_ok = false;
  std::vector<std::string> messages;
  bool ok() const { return graph_ok && targets_ok && laws_ok; }
};

/// Full validation: edge count, triangle inequalities (naming violating
/// cycles), and the C1/C2 checks per distinct law instance.
ScenarioValidation validate_scenario(const Scenario& scenario);

std::string scenario_digest(const Scenario& scenario);

/// Reproducibility record written next to command outputs.
struct RunManifest {
  std::string command;
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace triform
