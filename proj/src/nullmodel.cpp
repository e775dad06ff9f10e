#include "collab/nullmodel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include "collab/error.hpp"
#include "collab/modularity.hpp"
#include "collab/rng.hpp"

namespace collab {

namespace {

constexpr std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

ReshuffleResult reshuffle_time_controlled(const AuthorshipBipartite& bip, int rounds_factor,
                                          std::uint64_t seed) {
  if (rounds_factor < 1) throw DomainError("rounds_factor must be >= 1");
  ReshuffleResult res{bip, 0, 0};
  auto& links = res.bipartite.links;
  const auto n = links.size();
  if (n < 2) {
    res.attempts = n * static_cast<std::size_t>(rounds_factor);  // all degenerate
    return res;
  }

  // Year classes: link positions whose paper has the same year. A swap keeps
  // each position in its class, so the buckets never need updating.
  std::map<int, std::vector<std::size_t>> by_year;
  for (std::size_t e = 0; e < n; ++e) by_year[bip.papers[links[e].second].year].push_back(e);
  std::vector<const std::vector<std::size_t>*> bucket_of(n);
  for (const auto& [year, members] : by_year) {
    for (auto e : members) bucket_of[e] = &members;
  }

  std::unordered_set<std::uint64_t> present;
  present.reserve(n * 2);
  for (auto [c, p] : links) present.insert(pack(c, p));

  Rng rng(seed);
  const std::size_t budget = static_cast<std::size_t>(rounds_factor) * n;
  for (std::size_t t = 0; t < budget; ++t) {
    ++res.attempts;
    const auto e1 = uniform_index(rng, n);
    const auto& bucket = *bucket_of[e1];
    const auto e2 = bucket[uniform_index(rng, bucket.size())];
    auto [a, j] = links[e1];
    auto [b, i] = links[e2];
    if (a == b || i == j) continue;
    if (present.count(pack(a, i)) || present.count(pack(b, j))) continue;
    present.erase(pack(a, j));
    present.erase(pack(b, i));
    present.insert(pack(a, i));
    present.insert(pack(b, j));
    links[e1].second = i;
    links[e2].second = j;
    ++res.accepted;
  }
  std::sort(links.begin(), links.end());
  return res;
}

Graph CollabNetwork::to_graph() const {
  std::vector<WeightedEdge> list;
  list.reserve(edges.size());
  for (auto [u, v] : edges) list.push_back({u, v, 1.0});
  return Graph::from_edges(nodes.size(), list);
}

std::vector<std::size_t> CollabNetwork::degrees() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

CollabNetwork build_collab_network(const Corpus&, const AuthorshipBipartite& bip) {
  CollabNetwork net;
  net.focal = bip.focal;
  net.nodes = bip.collaborators;
  std::vector<std::vector<std::uint32_t>> on_paper(bip.papers.size());
  for (auto [c, p] : bip.links) on_paper[p].push_back(c);
  std::unordered_set<std::uint64_t> seen;
  for (auto& team : on_paper) {
    std::sort(team.begin(), team.end());
    for (std::size_t x = 0; x < team.size(); ++x) {
      for (std::size_t y = x + 1; y < team.size(); ++y) {
        if (seen.insert(pack(team[x], team[y])).second) {
          net.edges.emplace_back(team[x], team[y]);
        }
      }
    }
  }
  std::sort(net.edges.begin(), net.edges.end());
  return net;
}

RewireResult rewire_degree_preserved(const CollabNetwork& net, int rounds_factor,
                                     std::uint64_t seed) {
  if (rounds_factor < 1) throw DomainError("rounds_factor must be >= 1");
  RewireResult res{net, 0, 0, false};
  auto& edges = res.network.edges;
  const auto m = edges.size();
  if (m < 2) {
    res.degenerate = true;
    return res;
  }
  auto key = [](std::uint32_t x, std::uint32_t y) {
    return x < y ? pack(x, y) : pack(y, x);
  };
  std::unordered_set<std::uint64_t> present;
  present.reserve(m * 2);
  for (auto [u, v] : edges) present.insert(key(u, v));

  Rng rng(seed);
  const std::size_t budget = static_cast<std::size_t>(rounds_factor) * m;
  for (std::size_t t = 0; t < budget; ++t) {
    ++res.attempts;
    const auto e1 = uniform_index(rng, m);
    const auto e2 = uniform_index(rng, m);
    if (e1 == e2) continue;
    auto [a, b] = edges[e1];
    auto [c, d] = edges[e2];
    if (rng() & 1) std::swap(c, d);
    if (a == d || c == b) continue;
    if (present.count(key(a, d)) || present.count(key(c, b))) continue;
    present.erase(key(a, b));
    present.erase(key(c, d));
    present.insert(key(a, d));
    present.insert(key(c, b));
    edges[e1] = {std::min(a, d), std::max(a, d)};
    edges[e2] = {std::min(c, b), std::max(c, b)};
    ++res.accepted;
  }
  std::sort(edges.begin(), edges.end());
  return res;
}

QSignificance q_significance(const CollabNetwork& net, int n_rewires, std::uint64_t seed,
                             int rounds_factor) {
  if (net.edges.empty()) throw DomainError("collaboration network has no edges");
  if (n_rewires < 1) throw DomainError("n_rewires must be >= 1");
  QSignificance q;
  q.q_real = modularity(detect_communities(net.to_graph(), splitmix64(seed)));
  double sum = 0.0;
  for (int r = 0; r < n_rewires; ++r) {
    const auto rep_seed = splitmix64(seed + 0x1000 + static_cast<std::uint64_t>(r));
    auto rewired = rewire_degree_preserved(net, rounds_factor, rep_seed);
    sum += modularity(detect_communities(rewired.network.to_graph(), splitmix64(rep_seed)));
  }
  q.q_rand_mean = sum / n_rewires;
  q.ratio = q.q_rand_mean > 0.0 ? q.q_real / q.q_rand_mean
                                : std::numeric_limits<double>::quiet_NaN();
  return q;
}

}  // namespace collab
