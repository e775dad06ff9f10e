#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "collab/cociting.hpp"
#include "collab/ingest.hpp"
#include "collab/modularity.hpp"

namespace collab {

inline constexpr int kNoTopic = -1;

/// Major topics of one scientist. Topic ids are ordered by the year of each
/// topic's first paper (ties: the earliest paper by id), so topic 0 is the
/// scientist's first topic.
struct TopicAssignment {
  AuthorIdx owner = 0;
  std::vector<PaperIdx> papers;  // chronological, aligned with `topic`
  std::vector<int> topic;        // kNoTopic for minor communities
  std::vector<int> topic_first_year;
  std::vector<int> topic_size;

  int n_topics() const { return static_cast<int>(topic_first_year.size()); }
};

/// Communities whose share of the owner's papers exceeds `threshold` become
/// major topics. Papers in other communities and isolated papers get
/// kNoTopic.
TopicAssignment assign_topics(const Corpus& corpus, const CoCitingNetwork& net,
                              const ModularityContext& ctx, double threshold = 0.05);

struct TopicOptions {
  double threshold = 0.05;
  bool weighted = false;
};

/// Builds the co-citing network, runs community detection and assigns topics.
/// An edgeless network yields zero topics with every paper unlabeled.
TopicAssignment detect_topics(const Corpus& corpus, AuthorIdx author,
                              std::uint64_t seed, const TopicOptions& opts = {});

/// Reconstructs an assignment from per-paper labels (e.g. a stage export).
/// Labels must be kNoTopic or form 0..K-1 in first-year order.
TopicAssignment topics_from_labels(const Corpus& corpus, AuthorIdx author,
                                   std::span<const int> labels);

struct SeriesEntry {
  PaperIdx paper = 0;
  int year = 0;
  int topic = kNoTopic;
  std::int64_t c10 = 0;

  bool operator==(const SeriesEntry&) const = default;
};

/// The owner's chronological publication series annotated with topics.
std::vector<SeriesEntry> colored_series(const Corpus& corpus, const TopicAssignment& ta);

/// `paper_id,year,topic_id,c10`, topic_id = -1 for none.
void write_topics_csv(const Corpus& corpus, std::span<const SeriesEntry> series,
                      std::ostream& out);

}  // namespace collab
