#include <map>
#include <random>
#include <set>

#include "collab/error.hpp"
#include "collab/nullmodel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collab;

namespace {

AuthorshipBipartite random_bipartite(std::mt19937_64& rng, bool distinct_years) {
  AuthorshipBipartite b;
  const std::uint32_t nc = 1 + rng() % 12;
  const std::uint32_t np = 1 + rng() % 25;
  for (std::uint32_t c = 0; c < nc; ++c) b.collaborators.push_back(c + 1);
  for (std::uint32_t p = 0; p < np; ++p) {
    SeriesEntry e;
    e.paper = p;
    e.year = distinct_years ? 1950 + static_cast<int>(p) : 1990 + static_cast<int>(rng() % 4);
    b.papers.push_back(e);
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> links;
  for (std::uint32_t p = 0; p < np; ++p) links.insert({static_cast<std::uint32_t>(rng() % nc), p});
  const int extra = static_cast<int>(rng() % 30);
  for (int i = 0; i < extra; ++i) {
    links.insert({static_cast<std::uint32_t>(rng() % nc), static_cast<std::uint32_t>(rng() % np)});
  }
  b.links.assign(links.begin(), links.end());
  return b;
}

std::map<std::uint32_t, std::multiset<int>> years_by_collaborator(const AuthorshipBipartite& b) {
  std::map<std::uint32_t, std::multiset<int>> out;
  for (auto [c, p] : b.links) out[c].insert(b.papers[p].year);
  return out;
}

std::map<std::uint32_t, int> paper_degree(const AuthorshipBipartite& b) {
  std::map<std::uint32_t, int> out;
  for (auto [c, p] : b.links) ++out[p];
  return out;
}

}  // namespace

TEST_CASE("time-controlled reshuffle preserves degrees and years") {
  std::mt19937_64 rng(17);
  std::size_t total_accepted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto b = random_bipartite(rng, false);
    auto r = reshuffle_time_controlled(b, 4, trial);
    CHECK(r.attempts == 4 * b.links.size());
    CHECK(r.accepted <= r.attempts);
    total_accepted += r.accepted;
    CHECK(years_by_collaborator(r.bipartite) == years_by_collaborator(b));
    CHECK(paper_degree(r.bipartite) == paper_degree(b));
    std::set<std::pair<std::uint32_t, std::uint32_t>> unique(r.bipartite.links.begin(),
                                                             r.bipartite.links.end());
    CHECK(unique.size() == b.links.size());
    CHECK(r.bipartite.papers == b.papers);
  }
  CHECK(total_accepted > 0);
}

TEST_CASE("distinct-year bipartites are fixed points") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    auto b = random_bipartite(rng, true);
    auto r = reshuffle_time_controlled(b, 4, trial);
    CHECK(r.bipartite == b);
    CHECK(r.accepted == 0);
  }
}

TEST_CASE("2x2 same-year swap") {
  AuthorshipBipartite b;
  b.collaborators = {1, 2};
  b.papers = {{0, 2000, 0, 0}, {1, 2000, 1, 0}};
  b.links = {{0, 0}, {1, 1}};
  bool swapped = false;
  for (std::uint64_t seed = 0; seed < 20 && !swapped; ++seed) {
    auto r = reshuffle_time_controlled(b, 4, seed);
    swapped = r.bipartite.links == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{0, 1}, {1, 0}};
  }
  CHECK(swapped);
}

namespace {

CollabNetwork random_network(std::mt19937_64& rng) {
  CollabNetwork net;
  const std::uint32_t n = 4 + rng() % 30;
  for (std::uint32_t i = 0; i < n; ++i) net.nodes.push_back(i);
  std::set<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng() % 5 == 0) e.insert({i, j});
  net.edges.assign(e.begin(), e.end());
  return net;
}

}  // namespace

TEST_CASE("degree-preserving rewiring") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = random_network(rng);
    auto r = rewire_degree_preserved(net, 4, trial);
    CHECK(r.network.degrees() == net.degrees());
    std::set<std::pair<std::uint32_t, std::uint32_t>> unique;
    for (auto [u, v] : r.network.edges) {
      CHECK(u < v);
      unique.insert({u, v});
    }
    CHECK(unique.size() == net.edges.size());
    if (net.edges.size() < 2) CHECK(r.degenerate);
  }
}

TEST_CASE("stars are rewiring fixed points") {
  CollabNetwork star;
  for (std::uint32_t i = 0; i < 8; ++i) star.nodes.push_back(i);
  for (std::uint32_t i = 1; i < 8; ++i) star.edges.push_back({0, i});
  auto r = rewire_degree_preserved(star, 10, 5);
  CHECK(r.network.edges == star.edges);
  CHECK(r.accepted == 0);
}

TEST_CASE("two cliques are significantly modular") {
  CollabNetwork net;
  for (std::uint32_t i = 0; i < 12; ++i) net.nodes.push_back(i);
  for (std::uint32_t base : {0u, 6u})
    for (std::uint32_t i = 0; i < 6; ++i)
      for (std::uint32_t j = i + 1; j < 6; ++j) net.edges.push_back({base + i, base + j});
  net.edges.push_back({5, 6});
  std::sort(net.edges.begin(), net.edges.end());
  auto q = q_significance(net, 10, 1);
  CHECK(q.q_real > 0.4);
  CHECK(q.q_real / q.q_rand_mean == doctest::Approx(q.ratio));
  CHECK(q.ratio > 1.0);

  CollabNetwork empty;
  empty.nodes = {0, 1};
  CHECK_THROWS_AS(q_significance(empty, 10, 1), DomainError);
}
