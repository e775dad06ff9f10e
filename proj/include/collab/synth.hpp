#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "collab/ingest.hpp"

namespace collab {

/// Parameters of the planted-topic corpus generator.
struct SynthSpec {
  int n_focal = 20;
  int topics_per_focal = 3;
  int pool_size = 30;          // references per topic pool
  int papers_per_topic = 20;
  int papers_jitter = 0;       // +/- uniform spread on papers_per_topic
  int refs_per_paper = 8;
  int collaborators_per_topic = 8;
  double multi_topic_fraction = 0.0;
  int coauthors_min = 1;
  int coauthors_max = 3;
  int year_start = 1960;
  int year_end = 2010;
  int career_years = 20;
  int topic_stagger = 3;       // years between consecutive topic starts
  double pool_overlap = 0.0;   // chance a reference comes from a shared pool
  int collaborator_own_papers = 3;  // mean solo papers per collaborator
  double newcomer_fraction = 0.4;
  double c10_mean = 10.0;
  double impact_spread = 0.5;  // lognormal sigma of per-focal impact
  std::uint64_t seed = 42;

  /// Throws DomainError on an invalid combination.
  void validate() const;
};

struct GroundTruth {
  std::vector<std::string> focal_ids;
  std::map<std::string, int> paper_topic;  // focal papers only
  /// Topics each collaborator actually coauthored in, keyed by collaborator id.
  std::map<std::string, std::vector<int>> collaborator_topics;
  std::map<std::string, std::string> collaborator_focal;
};

struct SynthCorpus {
  Corpus corpus;
  GroundTruth truth;
};

/// Generates K disjoint reference pools per focal scientist, papers drawing
/// all their references from one pool, and per-topic collaborator teams
/// (a configured share spanning two topics). Deterministic in the seed.
SynthCorpus generate(const SynthSpec& spec);

void write_ground_truth_json(const GroundTruth& truth, const SynthSpec& spec, std::ostream& out);

}  // namespace collab
