#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collab/decompose.hpp"
#include "collab/ingest.hpp"
#include "collab/metrics.hpp"
#include "collab/nullmodel.hpp"
#include "collab/table.hpp"
#include "collab/topics.hpp"

namespace collab {

inline constexpr const char* kVersion = "1.0.0";

struct InputSpec {
  std::string path;
  std::string dataset;  // discipline label; defaults to the file stem
};

struct RunConfig {
  std::vector<InputSpec> inputs;
  std::filesystem::path output_dir;
  int min_papers = 50;
  double topic_threshold = 0.05;
  bool weighted = false;
  int min_copub_low = 2;
  int min_copub_high = 10;
  bool count_minor_papers = true;
  int rounds_factor = 4;
  bool surrogate = false;
  int recent_years = 2;
  int join_min_copub = 1;
  std::vector<double> top_k = {1.0, 10.0};
  int cohort_window = 30;
  int cohort_bin_width = 10;
  int n_rewires = 10;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  bool export_intermediates = false;
  ValidationConfig validation;

  /// Throws ValidationError for out-of-range settings or a missing seed.
  void validate() const;
  std::uint64_t require_seed() const;
};

struct Dataset {
  std::string name;
  Corpus corpus;
  std::vector<Diagnostic> rejected;
  std::vector<AuthorIdx> focal;  // sorted by author id
};

/// Loads every input and selects focal scientists. Throws ValidationError
/// when a dataset has no focal scientist.
std::vector<Dataset> load_datasets(const RunConfig& config);

// ---------------------------------------------------------------------------
// Per-focal kernels. The *_serial variants are plain loops kept as the
// reference the OpenMP versions are tested against.

std::vector<TopicAssignment> detect_all_topics(const Dataset& ds, const RunConfig& config);
std::vector<TopicAssignment> detect_all_topics_serial(const Dataset& ds, const RunConfig& config);

/// Everything computed for one focal scientist.
struct FocalAnalysis {
  FocalRecord record;
  std::vector<SeriesEntry> series;
  int n_collaborators = 0;

  struct Decomposition {
    std::vector<CollaboratorSeries> all;  // min_copub = 1
    CollaboratorStats low;                // min_copub_low
    CollaboratorStats high;               // min_copub_high
    std::vector<CollaboratorSeries> cohort_all;  // first cohort_window years
    CollaboratorStats cohort_low;
    CollaboratorStats cohort_high;
  };
  Decomposition real;
  std::optional<Decomposition> surrogate;
  std::size_t shuffle_accepted = 0;

  std::vector<JoinEvent> join;
  std::optional<QSignificance> q;
  std::optional<SimilarityTriple> sim_overall;
  std::optional<SimilarityTriple> sim_before;
  std::vector<InitialFeatures> initial;
};

FocalAnalysis analyze_focal(const Dataset& ds, const TopicAssignment& ta,
                            const RunConfig& config);

std::vector<FocalAnalysis> analyze_all(const Dataset& ds, std::span<const TopicAssignment> topics,
                                       const RunConfig& config);
std::vector<FocalAnalysis> analyze_all_serial(const Dataset& ds,
                                              std::span<const TopicAssignment> topics,
                                              const RunConfig& config);

struct DatasetAnalysis {
  const Dataset* dataset = nullptr;
  std::vector<FocalAnalysis> focal;
};

/// Figure-keyed tables. The first dataset drives every table except the
/// discipline comparisons, which span all datasets.
StatReport build_report(std::span<const DatasetAnalysis> analyses, const RunConfig& config);

// ---------------------------------------------------------------------------
// Stage artifacts

/// `<out>/topics/topics.csv` and `<out>/topics/stage.json`.
void write_topics_artifact(std::span<const Dataset> datasets,
                           std::span<const std::vector<TopicAssignment>> topics,
                           const RunConfig& config);

/// Reads the topics artifact back. Throws DependencyError when it is missing
/// or was produced for a different corpus or topic configuration.
std::vector<std::vector<TopicAssignment>> read_topics_artifact(std::span<const Dataset> datasets,
                                                               const RunConfig& config);

void write_manifest(std::span<const Dataset> datasets, const StatReport& report,
                    const RunConfig& config);

/// Per-scientist co-citing edges, topics and collaborator tables.
void write_intermediates(std::span<const DatasetAnalysis> analyses,
                         std::span<const std::vector<TopicAssignment>> topics,
                         const RunConfig& config);

/// Full run: load, detect topics, analyze, write the bundle. Reruns with the
/// same config and corpus produce byte-identical output.
StatReport run_pipeline(const RunConfig& config);

}  // namespace collab
