#include "collab/graph.hpp"

#include <algorithm>
#include <map>

namespace collab {

Graph Graph::from_edges(std::size_t n, std::span<const WeightedEdge> edges) {
  std::vector<std::map<std::uint32_t, double>> rows(n);
  Graph g;
  g.self_.assign(n, 0.0);
  for (const auto& e : edges) {
    if (e.u == e.v) {
      g.self_[e.u] += 2.0 * e.weight;
    } else {
      rows[e.u][e.v] += e.weight;
      rows[e.v][e.u] += e.weight;
    }
  }
  g.offsets_.assign(1, 0);
  for (const auto& row : rows) {
    for (const auto& [j, w] : row) {
      g.targets_.push_back(j);
      g.weights_.push_back(w);
    }
    g.offsets_.push_back(g.targets_.size());
  }
  g.finalize();
  return g;
}

void Graph::finalize() {
  const auto n = self_.size();
  strength_.assign(n, 0.0);
  total_ = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double k = self_[i];
    for (double w : weights(i)) k += w;
    strength_[i] = k;
    total_ += k;
  }
}

Graph Graph::aggregate(std::span<const std::uint32_t> community, std::size_t k) const {
  std::vector<std::vector<std::uint32_t>> members(k);
  for (std::size_t i = 0; i < node_count(); ++i) members[community[i]].push_back(i);

  Graph g;
  g.self_.assign(k, 0.0);
  g.offsets_.assign(1, 0);
  std::vector<double> acc(k, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t c = 0; c < k; ++c) {
    touched.clear();
    for (auto i : members[c]) {
      g.self_[c] += self_[i];
      auto nb = neighbors(i);
      auto ws = weights(i);
      for (std::size_t t = 0; t < nb.size(); ++t) {
        auto d = community[nb[t]];
        if (d == c) {
          g.self_[c] += ws[t];
          continue;
        }
        if (acc[d] == 0.0) touched.push_back(d);
        acc[d] += ws[t];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto d : touched) {
      g.targets_.push_back(d);
      g.weights_.push_back(acc[d]);
      acc[d] = 0.0;
    }
    g.offsets_.push_back(g.targets_.size());
  }
  g.finalize();
  return g;
}

}  // namespace collab
