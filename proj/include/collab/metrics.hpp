#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "collab/decompose.hpp"
#include "collab/ingest.hpp"
#include "collab/stats.hpp"
#include "collab/topics.hpp"

namespace collab {

// ---------------------------------------------------------------------------
// Joining the next topic

struct JoinCandidate {
  AuthorIdx collaborator = 0;
  int past_copub = 0;         // joint papers before the topic start year
  double past_mean_c10 = 0.0;  // mean c10 of those papers
  bool recent = false;        // joint paper in the start year or the year before
  bool joined = false;        // ever coauthored a paper labeled with the topic
};

/// A focal scientist starting a topic other than the first one.
struct JoinEvent {
  AuthorIdx focal = 0;
  int topic_id = 0;  // >= 1
  int topic_start_year = 0;
  int career_stage = 0;  // years since the focal scientist's first paper
  std::vector<JoinCandidate> existing;  // ordered by collaborator id
};

struct JoinOptions {
  int min_past_copub = 1;  // joint papers needed to count as existing
  int recent_years = 2;    // calendar labels in the recent window
};

/// Events for every topic after the first. `collaborators` must be the
/// unfiltered (min_copub = 1) decomposition of the same series.
std::vector<JoinEvent> join_events(std::span<const SeriesEntry> series,
                                   const TopicAssignment& ta,
                                   std::span<const CollaboratorSeries> collaborators,
                                   const JoinOptions& opts = {});

enum class JoinMode { overall, recent };
enum class JoinBinning { past_copub, past_copub_log, past_mean_c10, career_stage };

std::string to_string(JoinMode m);
std::string to_string(JoinBinning b);

struct JoinRow {
  double bin_low = 0.0;
  double bin_high = 0.0;  // exclusive
  JoinMode mode = JoinMode::overall;
  std::optional<double> probability;  // empty bin -> nullopt
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::size_t n = 0;  // candidates
  std::size_t joiners = 0;
};

/// Pooled joiners / candidates within each bin, with Wilson 95% intervals.
/// Bins are contiguous and cover every candidate.
std::vector<JoinRow> join_probability(std::span<const JoinEvent> events, JoinMode mode,
                                      JoinBinning binning);

/// Pooled probability over all candidates of all events.
JoinRow join_probability_pooled(std::span<const JoinEvent> events, JoinMode mode);

/// Mean over focal scientists of each scientist's pooled ratio.
std::optional<double> join_probability_per_focal(std::span<const JoinEvent> events,
                                                 JoinMode mode);

enum class JoinCovariate { past_copub, past_mean_c10 };

/// Kendall tau-b between a candidate covariate and the joined indicator.
/// nullopt when undefined (fewer than two candidates or a constant variable).
std::optional<CorrelationResult> join_tau(std::span<const JoinEvent> events, JoinMode mode,
                                          JoinCovariate covariate);

// ---------------------------------------------------------------------------
// Reference similarity

enum class SimilarityMetric { jaccard, cosine, lhn };
enum class SimilarityVariant { overall, before };

struct SimilarityTriple {
  double jaccard = 0.0;
  double cosine = 0.0;
  double lhn = 0.0;
};

/// Similarity of the reference sets of two scientists' papers.
/// `overall` uses all papers except joint ones; `before` uses papers from
/// years before their first joint paper. nullopt when a side has no usable
/// papers or an empty reference set.
std::optional<SimilarityTriple> reference_similarities(const Corpus& corpus, AuthorIdx focal,
                                                       AuthorIdx collaborator,
                                                       SimilarityVariant variant);

std::optional<double> reference_similarity(const Corpus& corpus, std::string_view focal,
                                           std::string_view collaborator,
                                           SimilarityMetric metric, SimilarityVariant variant);

/// Formula-level similarity of two sorted, duplicate-free id sets.
SimilarityTriple set_similarity(std::span<const RefIdx> a, std::span<const RefIdx> b);

struct SimilarityProfile {
  AuthorIdx focal = 0;
  std::vector<std::optional<SimilarityTriple>> overall;  // aligned with collaborators
  std::vector<std::optional<SimilarityTriple>> before;
  std::optional<SimilarityTriple> mean_overall;
  std::optional<SimilarityTriple> mean_before;
};

SimilarityProfile similarity_profile(const Corpus& corpus, AuthorIdx focal,
                                     std::span<const CollaboratorSeries> collaborators);

// ---------------------------------------------------------------------------
// Collaborators at the start of a collaboration

struct InitialFeatures {
  AuthorIdx collaborator = 0;
  int start_year = 0;
  int past_career_years = 0;
  int past_publications = 0;
  std::optional<double> citations_per_past_paper;
};

/// Features of each collaborator as of the year of the first joint paper,
/// counting the collaborator's papers from strictly earlier years.
std::vector<InitialFeatures> initial_collaborator_features(
    const Corpus& corpus, std::span<const CollaboratorSeries> collaborators);

// ---------------------------------------------------------------------------
// Stratification

enum class StratKey { productivity, impact, career_start, career_stage, n_topics };

struct FocalRecord {
  ScientistProfile profile;
  int n_topics = 0;
};

double strat_value(const FocalRecord& r, StratKey key);

struct TopPercent {
  double k = 10.0;
};
struct Deciles {};
struct YearBins {
  int width = 10;
};
using StratScheme = std::variant<TopPercent, Deciles, YearBins>;

/// author_id -> group. TopPercent: 1 for the ceil(k% * N) highest values (ties
/// at the boundary go to the smaller author id), 0 otherwise. Deciles: 0..9 by
/// ascending rank. YearBins: lower edge floor(value / width) * width.
std::map<std::string, int> stratify(std::span<const FocalRecord> records, StratKey key,
                                    const StratScheme& scheme);

/// Keeps entries from the first `window_years` calendar years of a career.
std::vector<SeriesEntry> truncate_series(std::span<const SeriesEntry> series,
                                         int career_start_year, int window_years);

}  // namespace collab
