#pragma once

// Brute-force reference computations for the tests. Deliberately naive and
// written without reusing the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "collab/graph.hpp"
#include "collab/ingest.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// Adjacency matrix: off-diagonal w in both directions, a self-loop adds 2w.
inline Dense dense_adjacency(std::size_t n, const std::vector<collab::WeightedEdge>& edges) {
  Dense a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    if (e.u == e.v) {
      a[e.u][e.u] += 2.0 * e.weight;
    } else {
      a[e.u][e.v] += e.weight;
      a[e.v][e.u] += e.weight;
    }
  }
  return a;
}

// Q = 1/2m sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j), literally.
inline double modularity(const Dense& a, const std::vector<std::uint32_t>& c) {
  const std::size_t n = a.size();
  std::vector<double> k(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i] += a[i][j];
    two_m += k[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c[i] == c[j]) q += a[i][j] - k[i] * k[j] / two_m;
    }
  }
  return q / two_m;
}

// Best modularity reachable by moving one node to another existing
// community or to a fresh singleton.
inline double best_single_move(const Dense& a, std::vector<std::uint32_t> c) {
  double best = modularity(a, c);
  std::set<std::uint32_t> labels(c.begin(), c.end());
  const std::uint32_t fresh = *labels.rbegin() + 1;
  labels.insert(fresh);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto orig = c[i];
    for (auto l : labels) {
      if (l == orig) continue;
      c[i] = l;
      best = std::max(best, modularity(a, c));
    }
    c[i] = orig;
  }
  return best;
}

inline std::vector<collab::WeightedEdge> random_graph(std::mt19937_64& rng, std::size_t n,
                                                      double p, bool weighted) {
  std::vector<collab::WeightedEdge> edges;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (u(rng) < p) edges.push_back({i, j, weighted ? 0.5 + 2.0 * u(rng) : 1.0});
    }
  }
  return edges;
}

// tau-b from all n(n-1)/2 pairs.
inline double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, tie_x = 0, tie_y = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      ++pairs;
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0) ++tie_x;
      if (dy == 0) ++tie_y;
      if (dx * dy > 0) ++concordant;
      if (dx * dy < 0) ++discordant;
    }
  }
  return (concordant - discordant) / std::sqrt((pairs - tie_x) * (pairs - tie_y));
}

// sup_t |F_a(t) - F_b(t)| evaluated at every sample point by counting.
inline double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  auto ecdf = [](const std::vector<double>& s, double t) {
    double c = 0;
    for (double v : s) c += v <= t;
    return c / static_cast<double>(s.size());
  };
  for (const auto* s : {&a, &b}) {
    for (double t : *s) d = std::max(d, std::fabs(ecdf(a, t) - ecdf(b, t)));
  }
  return d;
}

// ARI from the four pair counts.
inline double adjusted_rand(const std::vector<int>& a, const std::vector<int>& b) {
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      n11 += sa && sb;
      n10 += sa && !sb;
      n01 += !sa && sb;
      n00 += !sa && !sb;
    }
  }
  const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
  return den == 0 ? 1.0 : 2.0 * (n00 * n11 - n01 * n10) / den;
}

// Co-citing pairs of one author's papers by string-set intersection:
// (paper_id_u, paper_id_v) with u < v chronologically -> shared count.
inline std::map<std::pair<std::string, std::string>, int> cociting_pairs(
    const collab::Corpus& corpus, const std::string& author) {
  std::vector<const collab::PaperRecord*> papers;
  for (const auto& p : corpus.papers()) {
    if (std::find(p.author_ids.begin(), p.author_ids.end(), author) != p.author_ids.end()) {
      papers.push_back(&p);
    }
  }
  std::sort(papers.begin(), papers.end(), [](auto* x, auto* y) {
    return std::tie(x->year, x->paper_id) < std::tie(y->year, y->paper_id);
  });
  std::map<std::pair<std::string, std::string>, int> out;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    std::set<std::string> ri(papers[i]->reference_ids.begin(), papers[i]->reference_ids.end());
    for (std::size_t j = i + 1; j < papers.size(); ++j) {
      std::set<std::string> rj(papers[j]->reference_ids.begin(), papers[j]->reference_ids.end());
      int shared = 0;
      for (const auto& r : ri) shared += rj.count(r);
      if (shared > 0) out[{papers[i]->paper_id, papers[j]->paper_id}] = shared;
    }
  }
  return out;
}

}  // namespace oracle

namespace testutil {

inline collab::PaperRecord paper(std::string id, int year, std::vector<std::string> authors,
                                 std::vector<std::string> refs, std::int64_t c10 = 0) {
  return {std::move(id), year, std::move(authors), std::move(refs), c10};
}

}  // namespace testutil
