#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "collab/graph.hpp"
#include "collab/ingest.hpp"

namespace collab {

struct CoCitingEdge {
  std::uint32_t u = 0;  // local node index, u < v
  std::uint32_t v = 0;
  std::uint32_t weight = 0;  // number of shared references

  bool operator==(const CoCitingEdge&) const = default;
};

/// Graph over one scientist's papers; two papers are linked when they share
/// at least one reference.
struct CoCitingNetwork {
  AuthorIdx owner = 0;
  std::vector<PaperIdx> nodes;     // owner's papers, chronological
  std::vector<CoCitingEdge> edges;  // sorted by (u, v)

  /// Graph view for community detection. `weighted` keeps shared-reference
  /// counts; otherwise every link has weight 1.
  Graph to_graph(bool weighted) const;
  std::vector<std::vector<std::uint32_t>> adjacency() const;
};

/// Builds the network through a reference -> papers inverted index. Cost is
/// proportional to the number of co-citing pairs rather than n^2.
CoCitingNetwork build_cociting(const Corpus& corpus, AuthorIdx author);
CoCitingNetwork build_cociting(const Corpus& corpus, std::string_view author_id);

/// Serial pairwise-intersection reference. O(n^2 * refs).
CoCitingNetwork build_cociting_reference(const Corpus& corpus, AuthorIdx author);

/// `paper_u,paper_v,weight` rows.
void write_edge_list_csv(const Corpus& corpus, const CoCitingNetwork& net,
                         std::ostream& out);

}  // namespace collab
