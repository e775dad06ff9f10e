#include "collab/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "collab/error.hpp"
#include "collab/rng.hpp"
#include "json.hpp"

namespace collab {

namespace {

using Json = nlohmann::json;

std::optional<std::string> check_record(const PaperRecord& r,
                                        const ValidationConfig& cfg,
                                        std::string& field) {
  if (r.paper_id.empty()) {
    field = "paper_id";
    return "empty paper_id";
  }
  if (r.year < cfg.min_year || r.year > cfg.max_year) {
    field = "year";
    return "year " + std::to_string(r.year) + " outside [" +
           std::to_string(cfg.min_year) + ", " + std::to_string(cfg.max_year) +
           "]";
  }
  if (r.author_ids.empty()) {
    field = "author_ids";
    return "empty author list";
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& a : r.author_ids) {
    if (a.empty()) {
      field = "author_ids";
      return "empty author id";
    }
    if (!seen.insert(a).second) {
      field = "author_ids";
      return "duplicate author id '" + a + "'";
    }
  }
  if (r.c10 < 0) {
    field = "c10";
    return "negative c10";
  }
  return std::nullopt;
}

struct RecordError {
  std::string field;
  std::string message;
};

PaperRecord parse_json_record(const Json& j) {
  auto fail = [](std::string field, std::string msg) {
    throw RecordError{std::move(field), std::move(msg)};
  };
  if (!j.is_object()) fail("", "record is not a JSON object");

  PaperRecord r;
  auto id = j.find("paper_id");
  if (id == j.end() || !id->is_string()) fail("paper_id", "missing or not a string");
  r.paper_id = id->get<std::string>();

  auto year = j.find("year");
  if (year == j.end() || !year->is_number_integer()) fail("year", "missing or not an integer");
  r.year = year->get<int>();

  auto authors = j.find("author_ids");
  if (authors == j.end() || !authors->is_array()) fail("author_ids", "missing or not an array");
  for (const auto& a : *authors) {
    if (!a.is_string()) fail("author_ids", "non-string author id");
    r.author_ids.push_back(a.get<std::string>());
  }

  auto refs = j.find("reference_ids");
  if (refs == j.end() || !refs->is_array()) fail("reference_ids", "missing or not an array");
  for (const auto& x : *refs) {
    if (!x.is_string()) fail("reference_ids", "non-string reference id");
    r.reference_ids.push_back(x.get<std::string>());
  }

  auto c10 = j.find("c10");
  auto cites = j.find("citations");
  if (c10 != j.end()) {
    if (!c10->is_number_integer()) fail("c10", "not an integer");
    r.c10 = c10->get<std::int64_t>();
  } else if (cites != j.end()) {
    if (!cites->is_array()) fail("citations", "not an array");
    std::vector<CitationEvent> events;
    for (const auto& e : *cites) {
      if (!e.is_object() || !e.contains("citing_paper_id") || !e.contains("year") ||
          !e["citing_paper_id"].is_string() || !e["year"].is_number_integer())
        fail("citations", "event needs string citing_paper_id and integer year");
      events.push_back({e["citing_paper_id"].get<std::string>(), e["year"].get<int>()});
    }
    r.c10 = c10_from_citations(r.year, events);
  } else {
    fail("c10", "missing c10 and no citations list");
  }
  return r;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    auto piece = s.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// RFC 4180-style field splitting (quoted fields, doubled quotes).
std::vector<std::string> csv_fields(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

bool parse_int(const std::string& s, std::int64_t& v) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (...) {
    return false;
  }
  return pos == s.size();
}

// Accepts validated-or-rejected records and assembles the corpus.
LoadResult finish_load(std::vector<std::pair<std::size_t, PaperRecord>> parsed,
                       std::vector<Diagnostic> rejected,
                       const ValidationConfig& config) {
  std::unordered_map<std::string, std::size_t> first_line;
  std::vector<PaperRecord> good;
  good.reserve(parsed.size());
  for (auto& [line, rec] : parsed) {
    std::string field;
    if (auto msg = check_record(rec, config, field)) {
      rejected.push_back({line, field, *msg});
      continue;
    }
    auto [it, inserted] = first_line.emplace(rec.paper_id, line);
    if (!inserted) {
      throw ValidationError("line " + std::to_string(line) + ": duplicate paper_id '" +
                            rec.paper_id + "' (first seen on line " +
                            std::to_string(it->second) + ")");
    }
    good.push_back(std::move(rec));
  }
  std::stable_sort(rejected.begin(), rejected.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return {Corpus::build(std::move(good), config), std::move(rejected)};
}

}  // namespace

Corpus Corpus::build(std::vector<PaperRecord> papers, const ValidationConfig& config) {
  Corpus c;
  c.papers_ = std::move(papers);
  const auto n = c.papers_.size();
  c.paper_lookup_.reserve(n);
  c.paper_authors_.resize(n);
  c.paper_refs_.resize(n);
  std::unordered_map<std::string, RefIdx> ref_lookup;

  for (PaperIdx p = 0; p < n; ++p) {
    auto& rec = c.papers_[p];
    std::string field;
    if (auto msg = check_record(rec, config, field)) {
      throw ValidationError("paper '" + rec.paper_id + "' field " + field + ": " + *msg);
    }
    if (!c.paper_lookup_.emplace(rec.paper_id, p).second) {
      throw ValidationError("duplicate paper_id '" + rec.paper_id + "'");
    }
    for (const auto& a : rec.author_ids) {
      auto [it, inserted] =
          c.author_lookup_.emplace(a, static_cast<AuthorIdx>(c.author_names_.size()));
      if (inserted) {
        c.author_names_.push_back(a);
        c.author_papers_.emplace_back();
      }
      c.paper_authors_[p].push_back(it->second);
      c.author_papers_[it->second].push_back(p);
    }
    auto& refs = c.paper_refs_[p];
    for (const auto& r : rec.reference_ids) {
      auto [it, inserted] =
          ref_lookup.emplace(r, static_cast<RefIdx>(c.ref_names_.size()));
      if (inserted) c.ref_names_.push_back(r);
      refs.push_back(it->second);
    }
    std::sort(refs.begin(), refs.end());
    refs.erase(std::unique(refs.begin(), refs.end()), refs.end());
  }
  for (auto& list : c.author_papers_) {
    std::sort(list.begin(), list.end(),
              [&c](PaperIdx a, PaperIdx b) { return c.chrono_less(a, b); });
  }
  return c;
}

bool Corpus::chrono_less(PaperIdx a, PaperIdx b) const {
  const auto& pa = papers_[a];
  const auto& pb = papers_[b];
  if (pa.year != pb.year) return pa.year < pb.year;
  return pa.paper_id < pb.paper_id;
}

std::optional<PaperIdx> Corpus::find_paper(std::string_view id) const {
  auto it = paper_lookup_.find(std::string(id));
  if (it == paper_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<AuthorIdx> Corpus::find_author(std::string_view id) const {
  auto it = author_lookup_.find(std::string(id));
  if (it == author_lookup_.end()) return std::nullopt;
  return it->second;
}

AuthorIdx Corpus::require_author(std::string_view id) const {
  auto a = find_author(id);
  if (!a) throw ValidationError("unknown author '" + std::string(id) + "'");
  return *a;
}

LoadResult load_corpus(std::istream& in, const ValidationConfig& config) {
  std::vector<std::pair<std::size_t, PaperRecord>> parsed;
  std::vector<Diagnostic> rejected;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      parsed.emplace_back(lineno, parse_json_record(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      rejected.push_back({lineno, "", std::string("malformed JSON: ") + e.what()});
    } catch (const Json::exception& e) {
      rejected.push_back({lineno, "", e.what()});
    } catch (const RecordError& e) {
      rejected.push_back({lineno, e.field, e.message});
    }
  }
  return finish_load(std::move(parsed), std::move(rejected), config);
}

LoadResult load_corpus_csv(std::istream& in, const ValidationConfig& config) {
  std::vector<std::pair<std::size_t, PaperRecord>> parsed;
  std::vector<Diagnostic> rejected;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) return finish_load({}, {}, config);
  ++lineno;
  auto header = csv_fields(line);
  auto col = [&header](std::string_view name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_id = col("paper_id"), c_year = col("year"), c_auth = col("author_ids"),
            c_refs = col("reference_ids"), c_c10 = col("c10");
  for (auto [name, idx] : {std::pair{"paper_id", c_id}, {"year", c_year},
                           {"author_ids", c_auth}, {"reference_ids", c_refs},
                           {"c10", c_c10}}) {
    if (idx < 0) throw ValidationError(std::string("CSV header lacks column '") + name + "'");
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto f = csv_fields(line);
    if (f.size() != header.size()) {
      rejected.push_back({lineno, "", "expected " + std::to_string(header.size()) +
                                          " columns, got " + std::to_string(f.size())});
      continue;
    }
    PaperRecord r;
    r.paper_id = f[c_id];
    std::int64_t v = 0;
    if (!parse_int(f[c_year], v)) {
      rejected.push_back({lineno, "year", "not an integer"});
      continue;
    }
    r.year = static_cast<int>(v);
    if (!parse_int(f[c_c10], v)) {
      rejected.push_back({lineno, "c10", "not an integer"});
      continue;
    }
    r.c10 = v;
    r.author_ids = split(f[c_auth], ';');
    r.reference_ids = split(f[c_refs], ';');
    parsed.emplace_back(lineno, std::move(r));
  }
  return finish_load(std::move(parsed), std::move(rejected), config);
}

LoadResult load_corpus_file(const std::string& path, const ValidationConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return load_corpus_csv(in, config);
  }
  return load_corpus(in, config);
}

void write_corpus_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& p : corpus.papers()) {
    nlohmann::ordered_json j;
    j["paper_id"] = p.paper_id;
    j["year"] = p.year;
    j["author_ids"] = p.author_ids;
    j["reference_ids"] = p.reference_ids;
    j["c10"] = p.c10;
    out << j.dump() << '\n';
  }
}

std::uint64_t corpus_checksum(const Corpus& corpus) {
  std::ostringstream os;
  write_corpus_jsonl(corpus, os);
  return fnv1a(os.str());
}

std::int64_t c10_from_citations(int publication_year,
                                std::span<const CitationEvent> events) {
  std::set<std::string_view> citing;
  for (const auto& e : events) {
    if (e.year >= publication_year && e.year < publication_year + 10) {
      citing.insert(e.citing_paper_id);
    }
  }
  return static_cast<std::int64_t>(citing.size());
}

std::vector<std::string> select_focal(const Corpus& corpus, int min_papers) {
  std::vector<std::string> out;
  for (AuthorIdx a = 0; a < corpus.author_count(); ++a) {
    if (static_cast<int>(corpus.papers_of(a).size()) >= min_papers) {
      out.push_back(corpus.author_id(a));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScientistProfile profile(const Corpus& corpus, AuthorIdx author) {
  auto papers = corpus.papers_of(author);
  ScientistProfile prof;
  prof.author_id = corpus.author_id(author);
  prof.paper_count = static_cast<int>(papers.size());
  std::int64_t total = 0;
  for (PaperIdx p : papers) total += corpus.paper(p).c10;
  prof.mean_c10 = papers.empty() ? 0.0 : static_cast<double>(total) / papers.size();
  if (!papers.empty()) {
    prof.career_start_year = corpus.paper(papers.front()).year;
    prof.career_years = corpus.paper(papers.back()).year - prof.career_start_year;
  }
  return prof;
}

ScientistProfile profile(const Corpus& corpus, std::string_view author_id) {
  return profile(corpus, corpus.require_author(author_id));
}

}  // namespace collab
