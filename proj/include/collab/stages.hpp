#pragma once

#include <filesystem>
#include <iosfwd>

#include "collab/pipeline.hpp"

namespace collab {

struct IngestSummary {
  std::size_t records = 0;
  std::size_t rejected = 0;
  std::size_t focal = 0;
};

/// Validates every input and writes `ingest/diagnostics.csv` and
/// `ingest/profiles.csv`. Does not need a seed.
IngestSummary stage_ingest_validate(const RunConfig& config);

/// Writes `topics/`.
void stage_detect_topics(const RunConfig& config);

/// Reads `topics/`; writes `decompose/<dataset>/<author>.csv`.
void stage_decompose(const RunConfig& config);

/// Reads `topics/`; writes shuffled collaborator tables under `shuffle/`.
void stage_shuffle(const RunConfig& config);

/// Reads `topics/`; writes the same table bundle and manifest as a full run.
StatReport stage_stats(const RunConfig& config);

/// Reads a finished bundle; writes `index.csv` and `report.md`.
void stage_report(const std::filesystem::path& output_dir);

}  // namespace collab
