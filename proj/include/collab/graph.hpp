#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace collab {

struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 1.0;
};

/// Undirected weighted graph in CSR form, in adjacency-matrix convention:
/// off-diagonal entries are stored in both directions, and the diagonal
/// A_ii is kept separately (it only appears in aggregated graphs, where it
/// holds twice the internal weight of the merged community).
class Graph {
 public:
  Graph() = default;

  /// Builds from an undirected edge list. Parallel edges are summed.
  /// A self-loop (u == v) of weight w contributes 2w to A_uu.
  static Graph from_edges(std::size_t n, std::span<const WeightedEdge> edges);

  std::size_t node_count() const { return self_.size(); }
  std::size_t edge_count() const { return targets_.size() / 2; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double self_weight(std::size_t i) const { return self_[i]; }

  /// k_i = sum_j A_ij, diagonal included.
  double strength(std::size_t i) const { return strength_[i]; }
  /// 2m = sum_i k_i.
  double total_weight() const { return total_; }

  /// Collapses nodes by community label (labels must be 0..K-1).
  Graph aggregate(std::span<const std::uint32_t> community, std::size_t k) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<double> weights_;
  std::vector<double> self_;
  std::vector<double> strength_;
  double total_ = 0.0;

  void finalize();
};

}  // namespace collab
