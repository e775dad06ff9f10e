#include "collab/stages.hpp"

#include <fstream>
#include <sstream>

#include "collab/error.hpp"
#include "collab/rng.hpp"
#include "json.hpp"

namespace collab {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<Dataset> datasets_with_topics(const RunConfig& config,
                                          std::vector<std::vector<TopicAssignment>>& topics) {
  config.validate();
  auto datasets = load_datasets(config);
  topics = read_topics_artifact(datasets, config);
  return datasets;
}

}  // namespace

IngestSummary stage_ingest_validate(const RunConfig& config) {
  if (config.inputs.empty()) throw ValidationError("invalid config: no input corpus given");
  IngestSummary sum;
  Table diag{"diagnostics", {"dataset", "line", "field", "message"}, {}};
  Table prof{"profiles",
             {"dataset", "author_id", "paper_count", "mean_c10", "career_start_year",
              "career_years", "focal"},
             {}};
  for (const auto& in : config.inputs) {
    const auto name = in.dataset.empty() ? fs::path(in.path).stem().string() : in.dataset;
    auto loaded = load_corpus_file(in.path, config.validation);
    sum.records += loaded.corpus.paper_count() + loaded.rejected.size();
    sum.rejected += loaded.rejected.size();
    for (const auto& d : loaded.rejected) {
      diag.add({name, cell(d.line), d.field, d.message});
    }
    std::vector<std::string> ids;
    for (AuthorIdx a = 0; a < loaded.corpus.author_count(); ++a) {
      ids.push_back(loaded.corpus.author_id(a));
    }
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) {
      auto p = profile(loaded.corpus, id);
      const bool focal = p.paper_count >= config.min_papers;
      sum.focal += focal;
      prof.add({name, id, p.paper_count, p.mean_c10, p.career_start_year, p.career_years,
                cell(focal ? 1 : 0)});
    }
  }
  const auto dir = config.output_dir / "ingest";
  fs::create_directories(dir);
  write_csv(diag, dir);
  write_csv(prof, dir);
  return sum;
}

void stage_detect_topics(const RunConfig& config) {
  config.validate();
  auto datasets = load_datasets(config);
  std::vector<std::vector<TopicAssignment>> topics;
  for (const auto& ds : datasets) topics.push_back(detect_all_topics(ds, config));
  write_topics_artifact(datasets, topics, config);
}

void stage_decompose(const RunConfig& config) {
  std::vector<std::vector<TopicAssignment>> topics;
  auto datasets = datasets_with_topics(config, topics);
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& ds = datasets[d];
    for (const auto& ta : topics[d]) {
      auto bip = build_bipartite(ds.corpus, ta.owner, colored_series(ds.corpus, ta));
      auto out = open_out(config.output_dir / "decompose" / ds.name /
                          (ds.corpus.author_id(ta.owner) + ".csv"));
      write_collaborators_csv(decompose(ds.corpus, bip, {1, config.count_minor_papers}), out);
    }
  }
}

void stage_shuffle(const RunConfig& config) {
  std::vector<std::vector<TopicAssignment>> topics;
  auto datasets = datasets_with_topics(config, topics);
  const auto seed = config.require_seed();
  Table summary{"summary", {"dataset", "author_id", "links", "attempts", "accepted"}, {}};
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const auto& ds = datasets[d];
    for (const auto& ta : topics[d]) {
      const auto& id = ds.corpus.author_id(ta.owner);
      auto bip = build_bipartite(ds.corpus, ta.owner, colored_series(ds.corpus, ta));
      auto res = reshuffle_time_controlled(bip, config.rounds_factor,
                                           derive_seed(seed, "shuffle/" + ds.name + '/' + id));
      auto out = open_out(config.output_dir / "shuffle" / ds.name / (id + ".csv"));
      write_collaborators_csv(decompose(ds.corpus, res.bipartite, {1, config.count_minor_papers}),
                              out);
      summary.add({ds.name, id, cell(bip.links.size()), cell(res.attempts), cell(res.accepted)});
    }
  }
  write_csv(summary, config.output_dir / "shuffle");
}

StatReport stage_stats(const RunConfig& config) {
  std::vector<std::vector<TopicAssignment>> topics;
  auto datasets = datasets_with_topics(config, topics);
  std::vector<DatasetAnalysis> analyses;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    analyses.push_back({&datasets[d], analyze_all(datasets[d], topics[d], config)});
  }
  auto report = build_report(analyses, config);
  report.write(config.output_dir);
  write_manifest(datasets, report, config);
  if (config.export_intermediates) write_intermediates(analyses, topics, config);
  return report;
}

void stage_report(const fs::path& output_dir) {
  std::ifstream mf(output_dir / "manifest.json");
  if (!mf) {
    throw DependencyError("no manifest.json in " + output_dir.string() + "; run stats first");
  }
  auto manifest = nlohmann::json::parse(mf);

  std::ostringstream md;
  md << "# Results\n\n";
  md << "seed " << manifest["seed"].dump() << ", version "
     << manifest["version"].get<std::string>() << "\n\n";
  for (const auto& d : manifest["datasets"]) {
    md << "- " << d["name"].get<std::string>() << ": " << d["papers"].dump() << " papers, "
       << d["focal_scientists"].dump() << " focal scientists, " << d["rejected_records"].dump()
       << " rejected records\n";
  }
  md << '\n';

  Table index{"index", {"table", "rows", "columns"}, {}};
  for (const auto& t : manifest["tables"]) {
    const auto file = t.get<std::string>();
    std::ifstream in(output_dir / file);
    if (!in) throw DependencyError("manifest lists missing table " + file);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    if (lines.empty()) throw DependencyError("empty table " + file);
    const auto n_cols = std::count(lines[0].begin(), lines[0].end(), ',') + 1;
    index.add({file, cell(lines.size() - 1), cell(static_cast<std::int64_t>(n_cols))});

    constexpr std::size_t kPreview = 12;
    md << "## " << file.substr(0, file.size() - 4) << "\n\n";
    auto row = [&md](const std::string& line) {
      std::string s = "| ";
      for (char c : line) s += c == ',' ? std::string(" | ") : std::string(1, c);
      md << s << " |\n";
    };
    row(lines[0]);
    md << '|';
    for (std::int64_t i = 0; i < n_cols; ++i) md << " --- |";
    md << '\n';
    for (std::size_t i = 1; i < lines.size() && i <= kPreview; ++i) row(lines[i]);
    if (lines.size() - 1 > kPreview) md << "\n(" << lines.size() - 1 - kPreview << " more rows)\n";
    md << '\n';
  }
  write_csv(index, output_dir);
  auto out = open_out(output_dir / "report.md");
  out << md.str();
}

}  // namespace collab
