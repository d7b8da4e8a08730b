#include "triform/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace triform {

Configuration PartitionBlock::restrict_configuration(const Configuration& p) const {
  Configuration out;
  out.points.reserve(vertex_label.size());
  for (int label : vertex_label) out.points.push_back(p.at(label));
  return out;
}

int IndependentPartition::block_of(const Edge& e) const {
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if (std::binary_search(blocks[i].edges.begin(), blocks[i].edges.end(), e))
      return static_cast<int>(i);
  throw std::invalid_argument("edge not covered by the partition");
}

namespace {

PartitionBlock finalize_block(const std::vector<Edge>& edges,
                              const Configuration& p) {
  PartitionBlock block;
  block.edges = edges;
  std::sort(block.edges.begin(), block.edges.end());

  std::set<int> vset;
  for (const Edge& e : block.edges) {
    vset.insert(e.first);
    vset.insert(e.second);
  }
  block.vertices.assign(vset.begin(), vset.end());

  auto recovered = recover_henneberg(block.vertices, block.edges);
  if (!recovered)
    throw std::logic_error("partition block is not triangulated Laman");
  block.subgraph = recovered->graph();
  block.vertex_label = recovered->original_label;

  // Line direction from the farthest vertex pair, sign-canonical.
  double best = 0.0;
  Vec2 dir = Vec2::Zero();
  for (std::size_t i = 0; i < block.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < block.vertices.size(); ++j) {
      const Vec2 d = p.at(block.vertices[j]) - p.at(block.vertices[i]);
      if (d.norm() > best) {
        best = d.norm();
        dir = d / d.norm();
      }
    }
  if (dir.x() < 0.0 || (dir.x() == 0.0 && dir.y() < 0.0)) dir = -dir;
  block.line_direction = dir;
  return block;
}

}  // namespace

IndependentPartition independent_partition(const TriangulatedLamanGraph& graph,
                                           const Configuration& p,
                                           double collinearity_tol) {
  if (p.size() != graph.vertex_count())
    throw std::invalid_argument("configuration size does not match graph");

  IndependentPartition out;
  out.collinearity_tol = collinearity_tol;

  std::vector<std::vector<Edge>> blocks = {{make_edge(1, 2)}};
  std::map<Edge, int> block_of = {{make_edge(1, 2), 0}};

  const auto& steps = graph.steps();
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const HennebergStep& step = steps[s];
    const int j = step.parent.first, k = step.parent.second, v = step.new_vertex;
    const Edge ej = make_edge(j, v), ek = make_edge(k, v);
    const double measure = collinearity_measure(p.at(j), p.at(k), p.at(v));
    if (measure < 10.0 * collinearity_tol && measure >= 0.1 * collinearity_tol)
      out.fragile_steps.push_back(static_cast<int>(s) + 1);
    if (measure < collinearity_tol) {
      const int target = block_of.at(make_edge(j, k));
      blocks[target].push_back(ej);
      blocks[target].push_back(ek);
      block_of[ej] = target;
      block_of[ek] = target;
    } else {
      block_of[ej] = static_cast<int>(blocks.size());
      blocks.push_back({ej});
      block_of[ek] = static_cast<int>(blocks.size());
      blocks.push_back({ek});
    }
  }

  out.blocks.reserve(blocks.size());
  for (const auto& edges : blocks) out.blocks.push_back(finalize_block(edges, p));
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const PartitionBlock& a, const PartitionBlock& b) {
              return a.edges.front() < b.edges.front();
            });
  return out;
}

InducedSubsystem induced_subsystem(const FormationSystem& system,
                                   const PartitionBlock& block) {
  std::vector<InteractionLaw> laws;
  laws.reserve(block.subgraph.edges().size());
  for (const Edge& e : block.subgraph.edges()) {
    const Edge parent_edge = make_edge(block.vertex_label[e.first - 1],
                                       block.vertex_label[e.second - 1]);
    laws.push_back(system.law(parent_edge));
  }
  return {FormationSystem::create(block.subgraph, std::move(laws)),
          block.vertex_label};
}

Configuration InducedSubsystem::restrict_configuration(const Configuration& p) const {
  Configuration out;
  out.points.reserve(agents.size());
  for (int label : agents) out.points.push_back(p.at(label));
  return out;
}

bool partition_is_equilibrium_compatible(const FormationSystem& system,
                                         const Configuration& p,
                                         const IndependentPartition& partition,
                                         double tol) {
  const double residual = gradient_inf_norm(system, p);
  if (residual > tol)
    throw std::invalid_argument(
        "partition_is_equilibrium_compatible: input is not an equilibrium "
        "(residual " +
        std::to_string(residual) + ")");
  for (const PartitionBlock& block : partition.blocks) {
    const InducedSubsystem sub = induced_subsystem(system, block);
    const Configuration pi = sub.restrict_configuration(p);
    if (gradient_inf_norm(sub.system, pi) > 10.0 * tol) return false;
  }
  return true;
}

}  // namespace triform
