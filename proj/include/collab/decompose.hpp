#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "collab/ingest.hpp"
#include "collab/topics.hpp"

namespace collab {

/// Authorship links between a focal scientist's collaborators and the focal
/// scientist's coauthored papers.
struct AuthorshipBipartite {
  AuthorIdx focal = 0;
  std::vector<AuthorIdx> collaborators;  // sorted by author id
  std::vector<SeriesEntry> papers;       // focal papers with >= 1 coauthor
  std::vector<std::pair<std::uint32_t, std::uint32_t>> links;  // (collaborator, paper)

  bool operator==(const AuthorshipBipartite&) const = default;
};

AuthorshipBipartite build_bipartite(const Corpus& corpus, AuthorIdx focal,
                                    std::span<const SeriesEntry> series);

/// Coauthored papers of one (focal, collaborator) pair.
struct CollaboratorSeries {
  AuthorIdx collaborator = 0;
  std::string collaborator_id;
  std::vector<SeriesEntry> papers;  // chronological
  int n_copub = 0;
  int first_year = 0;
  int last_year = 0;
  std::vector<int> involved_topics;  // sorted, major topics only

  int n_topics_involved() const { return static_cast<int>(involved_topics.size()); }
};

struct DecomposeOptions {
  int min_copub = 1;
  /// When false, papers in minor communities do not count toward n_copub.
  bool count_minor_papers = true;
};

/// One series per collaborator meeting the co-publication filter, ordered by
/// collaborator id.
std::vector<CollaboratorSeries> decompose(const Corpus& corpus,
                                          const AuthorshipBipartite& bip,
                                          const DecomposeOptions& opts = {});

std::vector<CollaboratorSeries> decompose(const Corpus& corpus,
                                          std::span<const SeriesEntry> series,
                                          std::string_view focal, int min_copub);

/// Per-focal summary of collaborator topic involvement.
struct CollaboratorStats {
  std::map<int, double> distribution;  // n_topics -> share of qualifying
  double fraction_single = 0.0;
  int n_qualifying = 0;  // collaborators with >= 1 involved topic
  int n_no_topic = 0;    // excluded: every joint paper in a minor community

  bool empty() const { return n_qualifying == 0; }
};

CollaboratorStats collaborator_stats(std::span<const CollaboratorSeries> series);

/// Mean over scientists of each scientist's own distribution; scientists
/// without qualifying collaborators are skipped. Throws DomainError when none
/// qualify.
std::map<int, double> pooled_topic_distribution(std::span<const CollaboratorStats> stats);

/// Co-publication bins: exact counts 1..5, then [6,10), [10,18), [18,34), ...
/// with doubling widths. Returns the lower edges of the bins needed to cover
/// max_copub, plus the final upper edge.
std::vector<int> copub_bin_edges(int max_copub);

struct CopubBinRow {
  int bin_low = 0;
  int bin_high = 0;  // exclusive
  int n = 0;
  double mean_topics = 0.0;
  double se_topics = 0.0;
  double fraction_single = 0.0;
  double se_fraction = 0.0;
};

/// Mean involved-topic count and single-topic share per co-publication bin,
/// pooled over all collaborators of all focal scientists. Collaborators
/// with no major topic are excluded.
std::vector<CopubBinRow> topics_vs_copub(
    std::span<const std::vector<CollaboratorSeries>> per_focal);

struct TopicSpanStats {
  std::map<int, int> span_years;  // inclusive span -> (collaborator, topic) pairs
  std::map<int, int> copapers;    // papers on topic -> pairs
  std::size_t pairs = 0;
  double mean_span = 0.0;
};

TopicSpanStats topic_span_stats(std::span<const std::vector<CollaboratorSeries>> per_focal);

/// `collaborator_id,n_copub,first_year,last_year,n_topics_involved,topics`
/// with topics joined by ';'.
void write_collaborators_csv(std::span<const CollaboratorSeries> series, std::ostream& out);

}  // namespace collab
