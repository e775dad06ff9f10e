#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "collab/decompose.hpp"
#include "collab/graph.hpp"
#include "collab/ingest.hpp"

namespace collab {

struct ReshuffleResult {
  AuthorshipBipartite bipartite;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
};

/// Time-controlled surrogate: rounds_factor * |links| swap attempts, each
/// exchanging the papers of two links (a, j), (b, i) with year(i) ==
/// year(j). Attempts that would duplicate a link or are degenerate (a == b,
/// i == j) are rejected but still consume budget. Degrees on both sides and
/// every collaborator's multiset of collaboration years are preserved.
ReshuffleResult reshuffle_time_controlled(const AuthorshipBipartite& bip, int rounds_factor,
                                          std::uint64_t seed);

/// Coauthorship network among a focal scientist's collaborators.
struct CollabNetwork {
  AuthorIdx focal = 0;
  std::vector<AuthorIdx> nodes;  // sorted by author id
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted

  Graph to_graph() const;
  std::vector<std::size_t> degrees() const;
};

CollabNetwork build_collab_network(const Corpus& corpus, const AuthorshipBipartite& bip);

struct RewireResult {
  CollabNetwork network;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  bool degenerate = false;  // fewer than two edges, returned unchanged
};

/// Double-edge swaps (a,b),(c,d) -> (a,d),(c,b), rejecting self-loops and
/// multi-edges; rounds_factor * |edges| attempts.
RewireResult rewire_degree_preserved(const CollabNetwork& net, int rounds_factor,
                                     std::uint64_t seed);

struct QSignificance {
  double q_real = 0.0;
  double q_rand_mean = 0.0;
  double ratio = 0.0;  // NaN when the rewired modularity is not positive
};

/// Modularity of the detected communities on the real network against the
/// mean over n_rewires degree-preserving rewired copies. Throws DomainError
/// for an edgeless network.
QSignificance q_significance(const CollabNetwork& net, int n_rewires, std::uint64_t seed,
                             int rounds_factor = 4);

}  // namespace collab
