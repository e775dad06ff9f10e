#include "collab/cociting.hpp"

#include <algorithm>
#include <ostream>

namespace collab {

Graph CoCitingNetwork::to_graph(bool weighted) const {
  std::vector<WeightedEdge> list;
  list.reserve(edges.size());
  for (const auto& e : edges) {
    list.push_back({e.u, e.v, weighted ? static_cast<double>(e.weight) : 1.0});
  }
  return Graph::from_edges(nodes.size(), list);
}

std::vector<std::vector<std::uint32_t>> CoCitingNetwork::adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(nodes.size());
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

CoCitingNetwork build_cociting(const Corpus& corpus, AuthorIdx author) {
  CoCitingNetwork net;
  net.owner = author;
  auto papers = corpus.papers_of(author);
  net.nodes.assign(papers.begin(), papers.end());
  const auto n = static_cast<std::uint32_t>(net.nodes.size());

  // (reference, local node) postings, grouped by reference.
  std::vector<std::pair<RefIdx, std::uint32_t>> postings;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (auto r : corpus.refs_of(net.nodes[i])) postings.emplace_back(r, i);
  }
  std::sort(postings.begin(), postings.end());

  std::vector<std::uint32_t> shared(n, 0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t u = 0; u < n; ++u) {
    touched.clear();
    for (auto r : corpus.refs_of(net.nodes[u])) {
      auto it = std::upper_bound(postings.begin(), postings.end(), std::pair{r, u});
      for (; it != postings.end() && it->first == r; ++it) {
        if (shared[it->second]++ == 0) touched.push_back(it->second);
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto v : touched) {
      net.edges.push_back({u, v, shared[v]});
      shared[v] = 0;
    }
  }
  return net;
}

CoCitingNetwork build_cociting(const Corpus& corpus, std::string_view author_id) {
  return build_cociting(corpus, corpus.require_author(author_id));
}

CoCitingNetwork build_cociting_reference(const Corpus& corpus, AuthorIdx author) {
  CoCitingNetwork net;
  net.owner = author;
  auto papers = corpus.papers_of(author);
  net.nodes.assign(papers.begin(), papers.end());
  const auto n = static_cast<std::uint32_t>(net.nodes.size());
  for (std::uint32_t u = 0; u < n; ++u) {
    auto ru = corpus.refs_of(net.nodes[u]);
    for (std::uint32_t v = u + 1; v < n; ++v) {
      auto rv = corpus.refs_of(net.nodes[v]);
      std::uint32_t common = 0;
      for (auto r : ru) common += std::binary_search(rv.begin(), rv.end(), r) ? 1 : 0;
      if (common > 0) net.edges.push_back({u, v, common});
    }
  }
  return net;
}

void write_edge_list_csv(const Corpus& corpus, const CoCitingNetwork& net,
                         std::ostream& out) {
  out << "paper_u,paper_v,weight\n";
  for (const auto& e : net.edges) {
    out << corpus.paper(net.nodes[e.u]).paper_id << ','
        << corpus.paper(net.nodes[e.v]).paper_id << ',' << e.weight << '\n';
  }
}

}  // namespace collab
