#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace collab {

using PaperIdx = std::uint32_t;
using AuthorIdx = std::uint32_t;
using RefIdx = std::uint32_t;

/// One publication as read from the input.
struct PaperRecord {
  std::string paper_id;
  int year = 0;
  std::vector<std::string> author_ids;     // ordered, duplicate-free
  std::vector<std::string> reference_ids;  // set semantics
  std::int64_t c10 = 0;                    // citations within ten years

  bool operator==(const PaperRecord&) const = default;
};

struct ValidationConfig {
  int min_year = 1850;
  int max_year = 2035;
};

/// A rejected input record.
struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 when not line-oriented
  std::string field;
  std::string message;
};

/// Immutable, id-indexed publication collection.
///
/// Strings are interned once: papers, authors and references are addressed
/// by dense indices internally. Per-author paper lists are sorted by
/// (year, paper_id), which is the chronological order used everywhere.
class Corpus {
 public:
  Corpus() = default;

  /// Builds indexes over already-validated records. Throws ValidationError on
  /// a duplicate paper_id or an invalid record.
  static Corpus build(std::vector<PaperRecord> papers,
                      const ValidationConfig& config = {});

  std::size_t paper_count() const { return papers_.size(); }
  std::size_t author_count() const { return author_names_.size(); }
  std::size_t reference_count() const { return ref_names_.size(); }

  const PaperRecord& paper(PaperIdx p) const { return papers_[p]; }
  const std::vector<PaperRecord>& papers() const { return papers_; }

  std::optional<PaperIdx> find_paper(std::string_view id) const;
  std::optional<AuthorIdx> find_author(std::string_view id) const;
  /// Like find_author but throws ValidationError for an unknown id.
  AuthorIdx require_author(std::string_view id) const;

  const std::string& author_id(AuthorIdx a) const { return author_names_[a]; }
  const std::string& reference_id(RefIdx r) const { return ref_names_[r]; }

  std::span<const AuthorIdx> authors_of(PaperIdx p) const {
    return paper_authors_[p];
  }
  /// Interned references, sorted ascending and duplicate-free.
  std::span<const RefIdx> refs_of(PaperIdx p) const { return paper_refs_[p]; }
  /// Papers of an author in (year, paper_id) order.
  std::span<const PaperIdx> papers_of(AuthorIdx a) const {
    return author_papers_[a];
  }

  /// Strict weak order on papers: (year, paper_id).
  bool chrono_less(PaperIdx a, PaperIdx b) const;

 private:
  std::vector<PaperRecord> papers_;
  std::unordered_map<std::string, PaperIdx> paper_lookup_;
  std::vector<std::string> author_names_;
  std::unordered_map<std::string, AuthorIdx> author_lookup_;
  std::vector<std::string> ref_names_;
  std::vector<std::vector<AuthorIdx>> paper_authors_;
  std::vector<std::vector<RefIdx>> paper_refs_;
  std::vector<std::vector<PaperIdx>> author_papers_;
};

struct LoadResult {
  Corpus corpus;
  std::vector<Diagnostic> rejected;
};

/// Reads line-delimited JSON records. Invalid records are skipped and
/// reported; a duplicate paper_id throws ValidationError.
LoadResult load_corpus(std::istream& in, const ValidationConfig& config = {});

/// CSV adapter: header `paper_id,year,author_ids,reference_ids,c10`, array
/// columns joined with ';'.
LoadResult load_corpus_csv(std::istream& in,
                           const ValidationConfig& config = {});

/// Dispatches on the file extension (.csv, anything else is JSONL).
LoadResult load_corpus_file(const std::string& path,
                            const ValidationConfig& config = {});

/// Writes records in corpus order as JSONL. Output is byte-stable.
void write_corpus_jsonl(const Corpus& corpus, std::ostream& out);

/// Content checksum of a corpus (FNV-1a over the canonical JSONL form).
std::uint64_t corpus_checksum(const Corpus& corpus);

/// A citation event used to derive c10 when it is not supplied directly.
struct CitationEvent {
  std::string citing_paper_id;
  int year = 0;
};

/// Distinct citing papers with publication_year <= year < publication_year+10.
std::int64_t c10_from_citations(int publication_year,
                                std::span<const CitationEvent> events);

/// Authors with at least min_papers papers, sorted by author id.
std::vector<std::string> select_focal(const Corpus& corpus, int min_papers);

struct ScientistProfile {
  std::string author_id;
  int paper_count = 0;
  double mean_c10 = 0.0;
  int career_start_year = 0;
  int career_years = 0;  // last-paper year minus first-paper year
};

ScientistProfile profile(const Corpus& corpus, std::string_view author_id);
ScientistProfile profile(const Corpus& corpus, AuthorIdx author);

}  // namespace collab
