#include "triform/graph.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace triform {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
}

}  // namespace

TriangulatedLamanGraph TriangulatedLamanGraph::from_steps(
    const std::vector<HennebergStep>& steps) {
  TriangulatedLamanGraph g;
  g.vertex_count_ = 2 + static_cast<int>(steps.size());
  g.steps_ = steps;
  g.adjacency_.assign(g.vertex_count_, {});

  std::set<Edge> edge_set;
  auto add_edge = [&](int a, int b) {
    Edge e = make_edge(a, b);
    if (!edge_set.insert(e).second)
      throw std::invalid_argument("duplicate edge " + edge_str(e));
    g.adjacency_[e.first - 1].push_back(e.second);
    g.adjacency_[e.second - 1].push_back(e.first);
  };

  add_edge(1, 2);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const HennebergStep& s = steps[i];
    const int expected = static_cast<int>(i) + 3;
    const std::string where = "step " + std::to_string(i + 1);
    if (s.new_vertex != expected)
      throw std::invalid_argument(where + ": new vertex " +
                                  std::to_string(s.new_vertex) +
                                  " out of order, expected " +
                                  std::to_string(expected));
    Edge parent = make_edge(s.parent.first, s.parent.second);
    if (parent.first < 1 || parent.second >= s.new_vertex ||
        parent.first == parent.second)
      throw std::invalid_argument(where + ": parent edge " + edge_str(parent) +
                                  " references an invalid vertex");
    if (!edge_set.count(parent))
      throw std::invalid_argument(where + ": parent edge " + edge_str(parent) +
                                  " is not present");
    add_edge(parent.first, s.new_vertex);
    add_edge(parent.second, s.new_vertex);
  }

  g.edges_.assign(edge_set.begin(), edge_set.end());
  for (std::size_t i = 0; i < g.edges_.size(); ++i)
    g.edge_index_[g.edges_[i]] = static_cast<int>(i);
  for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
  return g;
}

bool TriangulatedLamanGraph::has_edge(int a, int b) const {
  return edge_index_.count(make_edge(a, b)) > 0;
}

int TriangulatedLamanGraph::edge_index(int a, int b) const {
  auto it = edge_index_.find(make_edge(a, b));
  if (it == edge_index_.end())
    throw std::invalid_argument("no edge " + edge_str(make_edge(a, b)));
  return it->second;
}

const std::vector<int>& TriangulatedLamanGraph::neighbors(int v) const {
  if (v < 1 || v > vertex_count_)
    throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
  return adjacency_[v - 1];
}

std::vector<std::array<int, 3>> TriangulatedLamanGraph::three_cycles() const {
  std::vector<std::array<int, 3>> cycles;
  for (const Edge& e : edges_) {
    const auto& na = neighbors(e.first);
    for (int k : na) {
      if (k > e.second && has_edge(e.second, k))
        cycles.push_back({e.first, e.second, k});
    }
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

namespace {

std::optional<RecoveredSequence> recover_impl(const std::vector<int>& vertices,
                                              const std::vector<Edge>& edges,
                                              RngStream* rng) {
  const int n = static_cast<int>(vertices.size());
  if (n < 2) return std::nullopt;
  if (static_cast<int>(edges.size()) != 2 * n - 3) return std::nullopt;

  std::map<int, std::set<int>> adj;
  for (int v : vertices) {
    if (adj.count(v)) return std::nullopt;  // duplicate label
    adj[v] = {};
  }
  for (const Edge& e : edges) {
    if (!adj.count(e.first) || !adj.count(e.second) || e.first == e.second)
      return std::nullopt;
    if (!adj[e.first].insert(e.second).second) return std::nullopt;
    adj[e.second].insert(e.first);
  }

  // Removal order, innermost last: (vertex, its two neighbors at removal).
  std::vector<std::array<int, 3>> removed;
  while (static_cast<int>(adj.size()) > 2) {
    std::vector<int> candidates;
    for (const auto& [v, nb] : adj) {
      if (nb.size() != 2) continue;
      auto it = nb.begin();
      int a = *it++;
      int b = *it;
      if (adj[a].count(b)) candidates.push_back(v);
    }
    if (candidates.empty()) return std::nullopt;
    int pick = rng ? candidates[rng->next_below(candidates.size())]
                   : candidates.front();
    auto it = adj[pick].begin();
    int a = *it++;
    int b = *it;
    removed.push_back({pick, a, b});
    adj[a].erase(pick);
    adj[b].erase(pick);
    adj.erase(pick);
  }
  if (adj.size() != 2) return std::nullopt;
  auto it = adj.begin();
  int base1 = it->first;
  int base2 = std::next(it)->first;
  if (!adj[base1].count(base2)) return std::nullopt;

  RecoveredSequence out;
  out.original_label = {base1, base2};
  std::map<int, int> canonical;  // input label -> 1..N
  canonical[base1] = 1;
  canonical[base2] = 2;
  for (auto rit = removed.rbegin(); rit != removed.rend(); ++rit) {
    int label = static_cast<int>(out.original_label.size()) + 1;
    canonical[(*rit)[0]] = label;
    out.original_label.push_back((*rit)[0]);
    out.steps.push_back(
        {label, make_edge(canonical.at((*rit)[1]), canonical.at((*rit)[2]))});
  }
  return out;
}

}  // namespace

std::optional<RecoveredSequence> recover_henneberg(const std::vector<int>& vertices,
                                                   const std::vector<Edge>& edges) {
  return recover_impl(vertices, edges, nullptr);
}

std::optional<RecoveredSequence> recover_henneberg(const std::vector<int>& vertices,
                                                   const std::vector<Edge>& edges,
                                                   RngStream& rng) {
  return recover_impl(vertices, edges, &rng);
}

TargetValidation validate_targets(const TriangulatedLamanGraph& graph,
                                  const TargetDistances& targets) {
  auto lookup = [&](int a, int b) {
    auto it = targets.find(make_edge(a, b));
    if (it == targets.end())
      throw std::invalid_argument("no target distance for edge " +
                                  edge_str(make_edge(a, b)));
    if (!(it->second > 0.0))
      throw std::invalid_argument("target distance for edge " +
                                  edge_str(make_edge(a, b)) +
                                  " must be strictly positive");
    return it->second;
  };

  TargetValidation result;
  for (const Edge& e : graph.edges()) lookup(e.first, e.second);
  for (const auto& cyc : graph.three_cycles()) {
    const double dij = lookup(cyc[0], cyc[1]);
    const double dik = lookup(cyc[0], cyc[2]);
    const double djk = lookup(cyc[1], cyc[2]);
    const bool strict = dij + dik > djk && dij + djk > dik && dik + djk > dij;
    if (!strict) result.violations.push_back({cyc, {dij, dik, djk}});
  }
  return result;
}

std::vector<HennebergStep> random_steps(int vertex_count, RngStream& rng) {
  if (vertex_count < 2)
    throw std::invalid_argument("vertex count must be at least 2");
  std::vector<Edge> edges = {make_edge(1, 2)};
  std::vector<HennebergStep> steps;
  for (int v = 3; v <= vertex_count; ++v) {
    Edge parent = edges[rng.next_below(edges.size())];
    steps.push_back({v, parent});
    edges.push_back(make_edge(parent.first, v));
    edges.push_back(make_edge(parent.second, v));
  }
  return steps;
}

}  // namespace triform
