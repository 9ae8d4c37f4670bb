#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gsemm/types.hpp"

namespace gsemm {

/// Directed successor relation between stored memories.
class EpisodeGraph {
 public:
  using Edge = std::pair<Index, Index>;

  EpisodeGraph() = default;
  EpisodeGraph(Index n_nodes, std::vector<Edge> edges);

  Index n_nodes() const noexcept { return n_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(Index from, Index to) const;

  /// Dense 0/1 adjacency, entry (from, to) set for every edge.
  Matrix adjacency() const;

 private:
  Index n_nodes_ = 0;
  std::vector<Edge> edges_;
};

/// Fair-coin +/-1 patterns, one per column. Pure function of its arguments.
Matrix generate_memories(Index n_f, Index n_memories, std::uint64_t seed);

/// Each cycle [a, b, ..., z] contributes a->b, b->c, ..., z->a.
/// `n_nodes` defaults to one past the largest index used.
EpisodeGraph build_episode_graph(const std::vector<std::vector<Index>>& cycles,
                                 std::optional<Index> n_nodes = std::nullopt);

/// phi(k, j) = 1/sqrt(alpha_s) for each edge k->j ("memory k is followed by j").
Matrix build_phi(const EpisodeGraph& graph, double alpha_s);

/// Preloaded synapses: memories become the columns of xi, phi comes from the graph.
SynapseState preload(const Matrix& memories, const EpisodeGraph& graph, double alpha_s);

}  // namespace gsemm
