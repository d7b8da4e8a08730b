#include "triform/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "triform/formats.hpp"
#include "triform/version.hpp"

namespace triform {

using nlohmann::json;

namespace {

Edge edge_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("edge must be a [i, j] pair");
  return make_edge(j[0].get<int>(), j[1].get<int>());
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  Scenario s;
  s.document = doc;

  if (!doc.contains("graph"))
    throw std::invalid_argument("scenario: missing 'graph'");
  const json& g = doc.at("graph");
  if (g.contains("file")) {
    s.graph = read_graph_file(base_dir / g.at("file").get<std::string>());
  } else {
    const int n = g.at("n").get<int>();
    std::vector<HennebergStep> steps;
    for (const json& step : g.value("steps", json::array())) {
      if (!step.is_array() || step.size() != 3)
        throw std::invalid_argument("scenario: graph step must be [v, j, k]");
      steps.push_back({step[0].get<int>(),
                       make_edge(step[1].get<int>(), step[2].get<int>())});
    }
    if (static_cast<int>(steps.size()) != n - 2)
      throw std::invalid_argument("scenario: graph needs N-2 steps");
    s.graph = build_graph(steps);
  }

  if (doc.contains("laws")) {
    const json& l = doc.at("laws");
    s.law_family = l.value("family", std::string("standard"));
    s.default_target = l.value("default_dbar", 1.0);
    for (const json& entry : l.value("targets", json::array()))
      s.target_overrides[edge_from_json(entry.at("edge"))] =
          entry.at("dbar").get<double>();
  }

  if (doc.contains("integrator")) {
    const json& i = doc.at("integrator");
    s.controls.rel_tol = i.value("rel_tol", s.controls.rel_tol);
    s.controls.abs_tol = i.value("abs_tol", s.controls.abs_tol);
    s.controls.equilibrium_tol =
        i.value("equilibrium_tol", s.controls.equilibrium_tol);
    s.controls.sample_interval =
        i.value("sample_interval", s.controls.sample_interval);
    s.horizon = i.value("horizon", s.horizon);
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    s.tolerances.collinearity = t.value("collinearity", s.tolerances.collinearity);
    s.tolerances.rank = t.value("rank", s.tolerances.rank);
    s.tolerances.orbit_match = t.value("orbit_match", s.tolerances.orbit_match);
    s.tolerances.congruence = t.value("congruence", s.tolerances.congruence);
  }

  s.seed = doc.value("seed", 1ull);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), static_cast<int>(e.byte), e.what());
  }
  return parse_scenario(doc, path.parent_path());
}

json scenario_to_json(const Scenario& s) {
  json g;
  g["n"] = s.graph.vertex_count();
  json steps = json::array();
  for (const HennebergStep& step : s.graph.steps())
    steps.push_back({step.new_vertex, step.parent.first, step.parent.second});
  g["steps"] = steps;

  json targets = json::array();
  for (const auto& [edge, dbar] : s.target_overrides)
    targets.push_back({{"edge", {edge.first, edge.second}}, {"dbar", dbar}});

  return json{
      {"graph", g},
      {"laws",
       {{"family", s.law_family},
        {"default_dbar", s.default_target},
        {"targets", targets}}},
      {"integrator",
       {{"rel_tol", s.controls.rel_tol},
        {"abs_tol", s.controls.abs_tol},
        {"equilibrium_tol", s.controls.equilibrium_tol},
        {"sample_interval", s.controls.sample_interval},
        {"horizon", s.horizon}}},
      {"tolerances",
       {{"collinearity", s.tolerances.collinearity},
        {"rank", s.tolerances.rank},
        {"orbit_match", s.tolerances.orbit_match},
        {"congruence", s.tolerances.congruence}}},
      {"seed", s.seed}};
}

TargetDistances scenario_targets(const Scenario& s) {
  TargetDistances targets;
  for (const Edge& e : s.graph.edges()) targets[e] = s.default_target;
  for (const auto& [edge, dbar] : s.target_overrides) {
    if (!targets.count(edge))
      throw std::invalid_argument("scenario: target override for non-edge (" +
                                  std::to_string(edge.first) + "," +
                                  std::to_string(edge.second) + ")");
    targets[edge] = dbar;
  }
  return targets;
}

FormationSystem make_system(const Scenario& s) {
  const TargetDistances targets = scenario_targets(s);
  std::vector<InteractionLaw> laws;
  laws.reserve(s.graph.edges().size());
  for (const Edge& e : s.graph.edges())
    laws.push_back(make_law(s.law_family, targets.at(e)));
  return FormationSystem::create(s.graph, std::move(laws));
}

ScenarioValidation validate_scenario(const Scenario& s) {
  ScenarioValidation v;
  std::ostringstream msg;

  v.graph_ok = static_cast<int>(s.graph.edges().size()) ==
               2 * s.graph.vertex_count() - 3;
  msg << "graph: N=" << s.graph.vertex_count() << " |E|="
      << s.graph.edges().size() << (v.graph_ok ? " ok" : " BAD EDGE COUNT");
  v.messages.push_back(msg.str());

  try {
    const TargetDistances targets = scenario_targets(s);
    const TargetValidation tv = validate_targets(s.graph, targets);
    v.targets_ok = tv.ok();
    if (tv.ok()) {
      v.messages.push_back("targets: triangle inequalities ok on all cycles");
    } else {
      for (const TriangleViolation& violation : tv.violations) {
        std::ostringstream m;
        m << "targets: cycle (" << violation.cycle[0] << ","
          << violation.cycle[1] << "," << violation.cycle[2]
          << ") violates the strict triangle inequalities";
        v.messages.push_back(m.str());
      }
    }
  } catch (const std::exception& e) {
    v.targets_ok = false;
    v.messages.push_back(std::string("targets: ") + e.what());
  }

  v.laws_ok = true;
  try {
    std::set<double> distinct;
    for (const auto& [edge, dbar] : scenario_targets(s)) distinct.insert(dbar);
    for (double dbar : distinct) {
      const LawValidationReport report =
          validate_law(make_law(s.law_family, dbar));
      if (!report.ok()) {
        v.laws_ok = false;
        std::ostringstream m;
        m << "law " << s.law_family << "(dbar=" << dbar << "): C1 "
          << (report.c1_ok ? "ok" : "FAIL") << ", C2 "
          << (report.c2_trend_ok ? "ok" : "FAIL");
        v.messages.push_back(m.str());
      }
    }
    if (v.laws_ok)
      v.messages.push_back("laws: C1/C2 checks ok for all edge targets");
  } catch (const std::exception& e) {
    v.laws_ok = false;
    v.messages.push_back(std::string("laws: ") + e.what());
  }
  return v;
}

std::string scenario_digest(const Scenario& s) {
  return fnv1a_digest(scenario_to_json(s).dump());
}

json RunManifest::to_json() const {
  return json{{"command", command},
              {"scenario_digest", scenario_digest},
              {"seed", seed},
              {"version", version},
              {"outputs", outputs}};
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_text_file(path, manifest.to_json().dump(2) + "\n");
}

}  // namespace triform
