#include "collab/modularity.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "collab/error.hpp"
#include "collab/rng.hpp"

namespace collab {

namespace {

// One level of local moving. Returns true if any node changed community.
bool local_move(const Graph& g, std::vector<std::uint32_t>& comm, Rng& rng) {
  const auto n = g.node_count();
  const double two_m = g.total_weight();
  const double eps = 1e-12 * two_m;

  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.strength(i);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> cand;

  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (auto i : order) {
      const auto own = comm[i];
      const double ki = g.strength(i);
      cand.clear();
      cand.push_back(own);
      seen[own] = 1;
      auto nb = g.neighbors(i);
      auto ws = g.weights(i);
      for (std::size_t t = 0; t < nb.size(); ++t) {
        auto c = comm[nb[t]];
        if (!seen[c]) {
          seen[c] = 1;
          cand.push_back(c);
        }
        link[c] += ws[t];
      }

      tot[own] -= ki;
      auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * ki / two_m; };
      const double stay = gain(own);
      double top = stay;
      for (auto c : cand) top = std::max(top, gain(c));

      auto best = own;
      if (top > stay + eps) {
        best = std::numeric_limits<std::uint32_t>::max();
        for (auto c : cand) {
          if (c != own && gain(c) >= top - eps) best = std::min(best, c);
        }
      }
      tot[best] += ki;
      comm[i] = best;
      if (best != own) {
        moved = true;
        any = true;
      }
      for (auto c : cand) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
  }
  return any;
}

}  // namespace

std::size_t ModularityContext::community_count() const {
  if (community.empty()) return 0;
  return *std::max_element(community.begin(), community.end()) + 1;
}

std::size_t relabel_contiguous(std::vector<std::uint32_t>& community) {
  std::vector<std::uint32_t> map;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t next = 0;
  for (auto& c : community) {
    if (c >= map.size()) map.resize(c + 1, unset);
    if (map[c] == unset) map[c] = next++;
    c = map[c];
  }
  return next;
}

double modularity(const ModularityContext& ctx) {
  const auto& g = ctx.graph;
  const double two_m = g.total_weight();
  if (two_m <= 0.0) throw DomainError("modularity undefined for a graph without edges");
  if (ctx.community.size() != g.node_count()) {
    throw DomainError("partition size does not match node count");
  }
  const auto k = ctx.community_count();
  std::vector<double> inside(k, 0.0), tot(k, 0.0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto c = ctx.community[i];
    tot[c] += g.strength(i);
    inside[c] += g.self_weight(i);
    auto nb = g.neighbors(i);
    auto ws = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (ctx.community[nb[t]] == c) inside[c] += ws[t];
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    q += inside[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  }
  return q;
}

ModularityContext detect_communities(const Graph& graph, std::uint64_t seed) {
  if (graph.total_weight() <= 0.0) {
    throw DomainError("community detection needs at least one edge");
  }
  Rng rng(seed);
  const auto n = graph.node_count();
  std::vector<std::uint32_t> partition(n);
  std::iota(partition.begin(), partition.end(), 0u);

  while (true) {
    local_move(graph, partition, rng);
    auto k = relabel_contiguous(partition);

    bool coarse_changed = false;
    Graph level = graph.aggregate(partition, k);
    while (true) {
      std::vector<std::uint32_t> coarse(level.node_count());
      std::iota(coarse.begin(), coarse.end(), 0u);
      if (!local_move(level, coarse, rng)) break;
      coarse_changed = true;
      auto kc = relabel_contiguous(coarse);
      for (auto& c : partition) c = coarse[c];
      level = level.aggregate(coarse, kc);
    }
    if (!coarse_changed) break;
  }
  relabel_contiguous(partition);
  return {graph, std::move(partition)};
}

}  // namespace collab
