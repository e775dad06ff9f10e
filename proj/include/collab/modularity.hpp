#pragma once

#include <cstdint>
#include <vector>

#include "collab/graph.hpp"

namespace collab {

/// A graph together with a partition of its nodes.
struct ModularityContext {
  Graph graph;
  std::vector<std::uint32_t> community;  // contiguous labels 0..K-1

  std::size_t community_count() const;
};

/// Q = 1/(2m) * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j).
/// Throws DomainError when the graph has no edges (m = 0).
double modularity(const ModularityContext& ctx);

/// Relabels a partition to 0..K-1 in order of first appearance by node index.
std::size_t relabel_contiguous(std::vector<std::uint32_t>& community);

/// Multi-level local moving and aggregation (fast unfolding) at resolution 1.
///
/// Node visit order is shuffled per level from `seed`. A node moves only on
/// a strict modularity gain; among equal best gains the lowest community id
/// wins. After coarsening converges the partition is re-polished on the
/// original graph, so the result admits no improving single-node move.
/// Throws DomainError for an edgeless graph.
ModularityContext detect_communities(const Graph& graph, std::uint64_t seed);

}  // namespace collab
